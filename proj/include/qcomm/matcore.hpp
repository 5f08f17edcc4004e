#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcomm {

using Complex = std::complex<double>;

/// Raised when an iterative kernel fails to converge or a numerical
/// precondition (such as Hermiticity) does not hold.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int iterations = 0)
        : std::runtime_error(what), iterations_(iterations) {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

/**
 * Dense square complex matrix, row-major, entry (i, j) with i the row.
 *
 * Value type: copies are deep. Dimension is fixed at construction and is
 * always at least 1.
 */
class CMatrix {
public:
    explicit CMatrix(std::size_t n);

    /// Build from nested row lists; throws if ragged, non-square or non-finite.
    static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> d);
    /// Matrix unit |i><j| of dimension n.
    static CMatrix unit(std::size_t n, std::size_t i, std::size_t j);

    std::size_t n() const noexcept { return n_; }

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * n_ + j];
    }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    Complex trace() const;
    bool is_finite() const;
    bool is_diagonal() const;

    CMatrix& operator+=(const CMatrix& rhs);
    CMatrix& operator-=(const CMatrix& rhs);
    CMatrix& operator*=(Complex s);

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t n_;
    std::vector<Complex> data_;
};

CMatrix operator+(CMatrix lhs, const CMatrix& rhs);
CMatrix operator-(CMatrix lhs, const CMatrix& rhs);
CMatrix operator*(const CMatrix& lhs, const CMatrix& rhs);
CMatrix operator*(Complex s, CMatrix m);

/// Dense complex column vector.
struct CVector {
    std::vector<Complex> entries;

    std::size_t dim() const noexcept { return entries.size(); }
    double norm_sq() const;
};

CVector operator*(const CMatrix& m, const CVector& v);

/// Singular values, descending.
struct SingularSpectrum {
    std::vector<double> values;
};

struct HermitianEigen {
    std::vector<double> values;  // descending
    CMatrix vectors;             // column k pairs with values[k]
};

/// Jacobi tuning. Defaults are the project-wide settings.
struct JacobiOptions {
    double off_tolerance = 1e-13;  // relative to ||H||_F
    int max_sweeps = 60;
};

// --- arithmetic -----------------------------------------------------------

/// AB - qBA. Throws std::invalid_argument on dimension mismatch.
CMatrix q_commutator(const CMatrix& a, const CMatrix& b, double q);

/// Sum of |a_ij|^2.
double frobenius_norm_sq(const CMatrix& a);

/// M^dagger M, with the lower triangle mirrored so the result is exactly Hermitian.
CMatrix gram(const CMatrix& m);

/// Kronecker product: (X (x) Y)[i*m + k, j*m + l] = X[i,j] * Y[k,l], m = Y.n().
CMatrix kron(const CMatrix& x, const CMatrix& y);

/// Column stacking: component j*n + i holds b_ij.
CVector vectorize(const CMatrix& b);
/// Inverse of vectorize. Throws if v.dim() != n*n.
CMatrix devectorize(const CVector& v, std::size_t n);

// --- spectral -------------------------------------------------------------

/// Cyclic complex Jacobi. Throws std::invalid_argument when H is not
/// Hermitian to 1e-12 relative, NumericalError on non-convergence.
HermitianEigen hermitian_eigen(const CMatrix& h, const JacobiOptions& opts = {});

/// Square roots of the eigenvalues of A^dagger A, clamped at zero.
SingularSpectrum singular_values(const CMatrix& a);
double operator_norm(const CMatrix& a);
/// s1^2 + s2^2 (s2 := 0 when n == 1).
double kyfan22_norm_sq(const CMatrix& a);

// --- sampling -------------------------------------------------------------

/**
 * Reproducible Gaussian stream. Every stochastic routine takes one of these
 * by reference; sub-streams derived with `fork` are independent of the order
 * in which they are consumed.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Deterministic sub-stream keyed by (seed, index).
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed) ^ mix(index + 0x9e3779b97f4a7c15ULL));
    }

    double gaussian() { return normal_(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    /// Complex standard Gaussian, E|z|^2 = 1.
    Complex complex_gaussian();

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

CMatrix random_matrix(std::size_t n, Rng& rng);
/// Gaussian matrix with (tr/n) I removed.
CMatrix random_traceless(std::size_t n, Rng& rng);
/// Gaussian complex diagonal matrix (normal matrices up to unitary similarity).
CMatrix random_normal_diag(std::size_t n, Rng& rng);
CVector random_vector(std::size_t dim, Rng& rng);

}  // namespace qcomm
