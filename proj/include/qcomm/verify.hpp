#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcomm/matcore.hpp"
#include "qcomm/optimizer.hpp"

namespace qcomm {

/// Outcome of one verification check.
///
/// `worst_violation` is signed: positive means the inequality under test was
/// violated by that much (in units of ||A||^2 ||B||^2, i.e. on unit-norm pairs).
struct CheckReport {
    std::string name;
    int trials = 0;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string details;
};

/// Coefficients of sigma_1, sigma_2, sigma_3.
struct PauliVector {
    std::array<Complex, 3> a{};

    CMatrix to_matrix() const;
};

const CMatrix& pauli(int k);  // k in {1, 2, 3}

/// The two sum-of-squares regroupings of X for A = [[0,a12],[a21,0]].
struct XDecomposition {
    double direct;
    double upper;  // (1-q)^2 ... + 2q |a12 b12* + a21 b21*|^2
    double lower;  // (1+q)^2 ... - 2q |a12 b12* - a21 b21*|^2
};

/// X = (1+q^2) ||A||^2 ||B||^2 - ||[A,B]_q||^2 computed three ways. A must be 2x2 zero-diagonal.
XDecomposition x_decomposition(const CMatrix& a, const CMatrix& b, double q);

CheckReport check_X_nonneg(double q, int trials, std::uint64_t seed);
CheckReport check_M_blocks(Complex a, Complex b, double q);
/// check_M_blocks on `trials` random (a, b, q).
CheckReport check_M_blocks_random(int trials, std::uint64_t seed);

/// (1-q)(a.b) I + i(1+q)(a x b).sigma
CMatrix su2_qcommutator(const PauliVector& a, const PauliVector& b, double q);
/// Compares su2_qcommutator with q_commutator and the norm identity on random vectors.
CheckReport check_su2_identity(double q, int trials, std::uint64_t seed);

CheckReport check_rank_one_traceless(double q, int n, int trials, std::uint64_t seed);
CheckReport check_prop1(double q, int n, int trials, std::uint64_t seed);
CheckReport check_counterexample_q2();

/// Sweeps the traceless class and compares against bound_traceless, one report per q.
std::vector<CheckReport> check_conjectures(int n, std::span<const double> q_grid,
                                           MatrixClass cls, const OptConfig& cfg);

struct ProofSuiteConfig {
    int trials = 10000;
    int x_trials = 100000;
    std::uint64_t seed = 1;
};

/// Every proved-statement check at the project's standard grid of (q, n).
std::vector<CheckReport> run_proof_suite(const ProofSuiteConfig& cfg);

}  // namespace qcomm
