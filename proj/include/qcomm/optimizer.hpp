#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcomm/bounds.hpp"
#include "qcomm/matcore.hpp"

namespace qcomm {

enum class MatrixClass { General, TracelessA, NormalA };

std::string to_string(MatrixClass c);
/// Accepts "general", "traceless", "normal".
std::optional<MatrixClass> parse_matrix_class(const std::string& s);

struct OptConfig {
    int n = 2;
    double q = 1.0;
    MatrixClass matrix_class = MatrixClass::General;
    int restarts = 64;
    int max_alternations = 500;
    double ratio_tol = 1e-11;
    std::uint64_t seed = 0;
    /// Worker threads for independent restarts; results do not depend on it.
    int threads = 1;

    /// Throws std::invalid_argument describing the first invalid field.
    void validate() const;
};

struct OptResult {
    double best_ratio = 0.0;
    CMatrix a{1};
    CMatrix b{1};
    int alternations_used = 0;
    int restart_index = 0;
    bool converged = false;
    int converged_restarts = 0;
};

/// Optimizer failure, tagged with the restart that raised it.
class OptimizerError : public NumericalError {
public:
    OptimizerError(const std::string& what, int restart)
        : NumericalError(what), restart_(restart) {}
    int restart_index() const noexcept { return restart_; }

private:
    int restart_;
};

/// M_A = I (x) A - q A^T (x) I, so that M_A vec(B) = vec([A,B]_q).
CMatrix build_MA(const CMatrix& a, double q);
/// N_B = B^T (x) I - q I (x) B, so that N_B vec(A) = vec([A,B]_q).
CMatrix build_NB(const CMatrix& b, double q);

struct HalfStep {
    CMatrix m;     // unit Frobenius norm
    double value;  // ratio attained with the fixed partner
};

/// Optimal B for fixed A: top eigenvector of M_A^dagger M_A.
HalfStep best_B_given_A(const CMatrix& a, double q);
/// Optimal A in `cls` for fixed B. Throws NumericalError when the
/// (projected) operator vanishes.
HalfStep best_A_given_B(const CMatrix& b, double q, MatrixClass cls);

/// Projects A onto the class (traceless part, or diagonal part).
CMatrix project_to_class(const CMatrix& a, MatrixClass cls);
CMatrix sample_class(std::size_t n, MatrixClass cls, Rng& rng);

/// One alternating ascent from a given start.
struct AscentTrace {
    CMatrix a;
    CMatrix b;
    double ratio;
    int alternations;
    bool converged;
    std::vector<double> history;  // value after every half-step
};

AscentTrace ascend(const CMatrix& a0, double q, MatrixClass cls, int max_alternations,
                   double ratio_tol);

OptResult maximize_ratio(const OptConfig& cfg);

/// Best known closed-form pair whose A lies in `cls` for (n, q).
std::optional<WitnessPair> class_witness(int n, double q, MatrixClass cls);

/// Like maximize_ratio, but restart 0 starts from class_witness.
OptResult seed_with_witness(const OptConfig& cfg);

/// Reference curve value for a sweep row.
BoundValue reference_bound(int n, double q, MatrixClass cls);

struct SweepRow {
    double q;
    int n;
    MatrixClass matrix_class;
    double max_ratio;
    double conjectured_bound;
    double gap;
    int converged_restarts;
};

/// One maximization per q (witness-seeded when `seed_witness`), rows ordered by q.
std::vector<SweepRow> sweep_q(int n, std::span<const double> q_values, MatrixClass cls,
                              const OptConfig& cfg_template, bool seed_witness = true);

/// Uniform grid with inclusive endpoints.
std::vector<double> q_grid(double from, double to, int steps);

}  // namespace qcomm
