#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcomm/matcore.hpp"

namespace qcomm {

/// Which result a bound coefficient comes from.
enum class BoundRegime {
    GeneralNonpositiveQ,             // (1-q)^2, any A, B, q <= 0
    NormalEitherPositiveQ,           // 1+q^2, A or B normal, q >= 0
    TracelessConjecturePositiveQ,    // 1+q^2, A or B traceless, q > 0 (conjectured)
    TracelessConjectureNonpositiveQ  // max(g(n)(1-q)^2, 1+q^2), q <= 0 (conjectured)
};

std::string to_string(BoundRegime r);

/// c such that ||[A,B]_q||^2 <= c ||A||^2 ||B||^2 within `regime`.
struct BoundValue {
    double coefficient;
    BoundRegime regime;
};

/// A concrete (A, B, q) whose ratio is known in closed form.
struct WitnessPair {
    CMatrix a;
    CMatrix b;
    double q;
    double expected_ratio;
    std::string label;
};

/// ||[A,B]_q||^2 / (||A||^2 ||B||^2). Throws std::invalid_argument if A or B is zero.
double ratio(const CMatrix& a, const CMatrix& b, double q);

double bound_general_nonpositive(double q);
double bound_normal_positive(double q);
/// (n^2 - 3n + 3) / (n(n-1)), n >= 2.
double g(int n);

struct CrossoverInterval {
    double q_min;
    double q_max;
};

/// Negative-q interval on which g(n)(1-q)^2 >= 1+q^2. Requires n >= 4.
CrossoverInterval q_crossover(int n);

/// Conjectured traceless bound: 1+q^2 for q > 0, max(g(n)(1-q)^2, 1+q^2) otherwise.
double bound_traceless(int n, double q);
BoundValue traceless_bound_value(int n, double q);

// The two-parameter counterexample family for q > 0.
std::pair<CMatrix, CMatrix> f_family_pair(double q, double t);
double f_eval(double q, double t);
double t_max(double q);
double x_of_q(double q);
double h_of_q(double q);
double f_at_tmax(double q);

/// A = B = diag(n-1, -1, ..., -1); ratio g(n)(1-q)^2 for every q.
WitnessPair diag_counterexample(int n, double q);

/// The q=2 pair [[2,8],[0,-1]], [[2,0],[-8,-1]].
WitnessPair counterexample_q2();

/// Zero-pads a k x k matrix into the top-left block of an n x n one.
CMatrix embed(const CMatrix& small, std::size_t n);

/**
 * Sharpness witnesses for (q, n):
 *  - q > 0:  (diag(1,-q,0,...), E12) attaining 1+q^2 (B traceless, A normal);
 *  - q <= 0: (P, P) with P = E11, attaining (1-q)^2;
 *  - q <= 0, n >= 4, q in the crossover interval: diag_counterexample(n, q).
 * Every q also gets the mirrored pair (E12, diag(-q,1,0,...)) attaining
 * 1+q^2 with A traceless.
 */
std::vector<WitnessPair> sharpness_witnesses(double q, int n);

}  // namespace qcomm
