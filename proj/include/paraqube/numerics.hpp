#pragma once

// Dense complex linear algebra for small systems: Kronecker products,
// matrix exponentials, eigensystems, and a sparse symmetric positive
// definite solve used as the continuous oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace paraqube {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

inline bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

// Row-major dense complex matrix. The hermitian flag is advisory metadata
// set by builders that know the symmetry; consumers that need certainty
// call is_hermitian.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    ComplexVector data;
    bool hermitian = false;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        m.hermitian = true;
        return m;
    }
};

inline void require_finite(const ComplexMatrix& m, const std::string& who) {
    for (const auto& z : m.data)
        detail::require(detail::finite(z), who + ": non-finite matrix entry");
}

inline void require_finite(const ComplexVector& v, const std::string& who) {
    for (const auto& z : v)
        detail::require(detail::finite(z), who + ": non-finite vector entry");
}

inline void require_finite(const RealVector& v, const std::string& who) {
    for (double x : v)
        detail::require(std::isfinite(x), who + ": non-finite vector entry");
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.cols == b.rows, "matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.rows == b.rows && a.cols == b.cols, "matrix sum: shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += b.data[k];
    out.hermitian = a.hermitian && b.hermitian;
    return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.rows == b.rows && a.cols == b.cols, "matrix difference: shape mismatch");
    ComplexMatrix out = a;
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] -= b.data[k];
    out.hermitian = a.hermitian && b.hermitian;
    return out;
}

inline ComplexMatrix operator*(const Complex& s, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (auto& z : out.data) z *= s;
    out.hermitian = m.hermitian && s.imag() == 0.0;
    return out;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
    out.hermitian = m.hermitian;
    return out;
}

inline ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
    detail::require(m.cols == v.size(), "matvec: dimension mismatch");
    ComplexVector out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
    return out;
}

inline double max_abs(const ComplexMatrix& m) {
    double best = 0.0;
    for (const auto& z : m.data) best = std::max(best, std::abs(z));
    return best;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.data) s += std::norm(z);
    return std::sqrt(s);
}

inline double norm2(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline double norm2(const RealVector& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    if (!m.square()) return false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i; j < m.cols; ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

// Guard against runaway tensor products; catalog matrices stay far below this.
inline constexpr std::size_t kMaxMatrixEntries = std::size_t(1) << 24;

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    detail::require(a.rows * b.rows != 0 && a.cols * b.cols != 0, "kron: empty factor");
    detail::require(a.rows * b.rows * a.cols * b.cols <= kMaxMatrixEntries,
                    "kron: result exceeds configured size limit");
    ComplexMatrix out(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const Complex aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    out(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    out.hermitian = a.hermitian && b.hermitian;
    return out;
}

// Scaling and squaring: scale so the infinity norm is at most 1/2, sum the
// series to machine precision, square back. Accurate for the small dense
// matrices in scope.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& m, double tol = 1e-13) {
    detail::require(m.square(), "matrix_exponential: matrix must be square");
    detail::require(tol > 0.0, "matrix_exponential: tol must be positive");
    require_finite(m, "matrix_exponential");

    double norm = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) row += std::abs(m(i, j));
        norm = std::max(norm, row);
    }
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));

    ComplexMatrix scaled = m;
    const double scale = std::ldexp(1.0, -s);
    for (auto& z : scaled.data) z *= scale;

    ComplexMatrix sum = ComplexMatrix::identity(m.rows);
    ComplexMatrix term = ComplexMatrix::identity(m.rows);
    for (int k = 1; k <= 64; ++k) {
        term = term * scaled;
        for (auto& z : term.data) z /= static_cast<double>(k);
        for (std::size_t idx = 0; idx < sum.data.size(); ++idx) sum.data[idx] += term.data[idx];
        if (max_abs(term) < 0.25 * tol * std::max(1.0, max_abs(sum))) break;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    sum.hermitian = false;
    return sum;
}

struct Eigensystem {
    ComplexVector values;   // ascending by real part, then imaginary part
    ComplexMatrix vectors;  // eigenvectors as columns, unit norm
};

namespace detail {

// Cyclic complex Jacobi diagonalization. Works at any dimension; the public
// eigensystem wrapper applies the catalog size cap.
inline std::pair<RealVector, ComplexMatrix> jacobi_hermitian(const ComplexMatrix& input) {
    const std::size_t n = input.rows;
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(frobenius_norm(a), 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) < 1e-14 * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const Complex phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sN = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - sN * std::conj(phase) * akq;
                    a(k, q) = sN * phase * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - sN * phase * aqk;
                    a(q, k) = sN * std::conj(phase) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - sN * std::conj(phase) * vkq;
                    v(k, q) = sN * phase * vkp + c * vkq;
                }
            }
        }
    }

    RealVector values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

    RealVector sorted_values(n);
    ComplexMatrix sorted_vectors(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        sorted_values[col] = values[order[col]];
        for (std::size_t row = 0; row < n; ++row) sorted_vectors(row, col) = v(row, order[col]);
    }
    return {std::move(sorted_values), std::move(sorted_vectors)};
}

// Fix the global phase so the largest-magnitude component is real positive;
// first index wins ties. Makes decode comparisons deterministic.
inline void normalize_phase(ComplexVector& v) {
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best_mag + 1e-15) {
            best_mag = mag;
            best = i;
        }
    }
    if (best_mag == 0.0) return;
    const Complex rot = std::conj(v[best]) / best_mag;
    for (auto& z : v) z *= rot;
}

}  // namespace detail

// Closed-form eigensystem of a general complex 2x2 matrix.
inline Eigensystem eigensystem_2x2(const ComplexMatrix& m) {
    detail::require(m.square() && m.rows == 2, "eigensystem_2x2: matrix must be 2x2");
    const Complex tr = m(0, 0) + m(1, 1);
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const Complex disc = std::sqrt(tr * tr / 4.0 - det);
    ComplexVector lambdas = {tr / 2.0 - disc, tr / 2.0 + disc};
    if (lambdas[1].real() < lambdas[0].real() ||
        (lambdas[1].real() == lambdas[0].real() && lambdas[1].imag() < lambdas[0].imag()))
        std::swap(lambdas[0], lambdas[1]);

    Eigensystem out;
    out.values = lambdas;
    out.vectors = ComplexMatrix(2, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        const Complex l = lambdas[k];
        ComplexVector v1 = {m(0, 1), l - m(0, 0)};
        ComplexVector v2 = {l - m(1, 1), m(1, 0)};
        ComplexVector v = (norm2(v1) >= norm2(v2)) ? v1 : v2;
        const double nv = norm2(v);
        if (nv < 1e-14) {
            if (std::abs(disc) < 1e-14) {
                // Scalar multiple of the identity: any basis diagonalizes.
                v = (k == 0) ? ComplexVector{1.0, 0.0} : ComplexVector{0.0, 1.0};
            } else {
                throw std::runtime_error("eigensystem_2x2: defective matrix");
            }
        } else {
            for (auto& z : v) z /= nv;
        }
        detail::normalize_phase(v);
        out.vectors(0, k) = v[0];
        out.vectors(1, k) = v[1];
    }
    return out;
}

// Eigensystem of a catalog-sized matrix: Hermitian inputs of any supported
// dimension via Jacobi, non-Hermitian inputs only at dimension 2.
inline Eigensystem eigensystem(const ComplexMatrix& m) {
    detail::require(m.square(), "eigensystem: matrix must be square");
    detail::require(m.rows >= 1 && m.rows <= 8, "eigensystem: dimension must be in [1, 8]");
    require_finite(m, "eigensystem");

    if (is_hermitian(m)) {
        auto [values, vectors] = detail::jacobi_hermitian(m);
        Eigensystem out;
        out.values.reserve(values.size());
        for (double x : values) out.values.emplace_back(x, 0.0);
        for (std::size_t col = 0; col < vectors.cols; ++col) {
            ComplexVector v(vectors.rows);
            for (std::size_t row = 0; row < vectors.rows; ++row) v[row] = vectors(row, col);
            detail::normalize_phase(v);
            for (std::size_t row = 0; row < vectors.rows; ++row) vectors(row, col) = v[row];
        }
        out.vectors = std::move(vectors);
        return out;
    }
    if (m.rows == 2) return eigensystem_2x2(m);
    throw std::invalid_argument("eigensystem: non-Hermitian input supported only at dimension 2");
}

// Sparse real symmetric matrix stored as the upper triangle (i <= j).
// Builders call add, then finalize once; evaluation implies the symmetry.
struct RealSymmetricSparse {
    struct Entry {
        std::size_t i;
        std::size_t j;
        double value;
    };

    std::size_t dim = 0;
    std::vector<Entry> entries;

    RealSymmetricSparse() = default;
    explicit RealSymmetricSparse(std::size_t d) : dim(d) {}

    void add(std::size_t i, std::size_t j, double value) {
        detail::require(i <= j && j < dim, "RealSymmetricSparse::add: need i <= j < dim");
        detail::require(std::isfinite(value), "RealSymmetricSparse::add: non-finite value");
        if (value != 0.0) entries.push_back({i, j, value});
    }

    // Sorts, merges duplicate coordinates, and drops exact zeros.
    void finalize() {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
        std::vector<Entry> merged;
        merged.reserve(entries.size());
        for (const Entry& e : entries) {
            if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j)
                merged.back().value += e.value;
            else
                merged.push_back(e);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Entry& e) { return e.value == 0.0; }),
                     merged.end());
        entries = std::move(merged);
    }

    RealVector apply(const RealVector& x) const {
        detail::require(x.size() == dim, "RealSymmetricSparse::apply: dimension mismatch");
        RealVector y(dim, 0.0);
        for (const Entry& e : entries) {
            y[e.i] += e.value * x[e.j];
            if (e.i != e.j) y[e.j] += e.value * x[e.i];
        }
        return y;
    }

    // x^T A x with the implied symmetric completion.
    double quadratic(const RealVector& x) const {
        detail::require(x.size() == dim, "RealSymmetricSparse::quadratic: dimension mismatch");
        double s = 0.0;
        for (const Entry& e : entries) {
            const double term = e.value * x[e.i] * x[e.j];
            s += (e.i == e.j) ? term : 2.0 * term;
        }
        return s;
    }
};

// Conjugate gradient solve of A x = b for symmetric positive definite A.
// Breakdown (p^T A p <= 0) signals a non-positive-definite matrix and is
// reported, not masked.
inline RealVector solve_spd(const RealSymmetricSparse& a, const RealVector& b,
                            double tol = 1e-13, std::size_t max_iter = 0) {
    detail::require(b.size() == a.dim, "solve_spd: dimension mismatch");
    require_finite(b, "solve_spd");
    const double bnorm = norm2(b);
    RealVector x(a.dim, 0.0);
    if (bnorm == 0.0) return x;
    if (max_iter == 0) max_iter = 50 * std::max<std::size_t>(a.dim, 20);

    RealVector r = b;
    RealVector p = r;
    double rs = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);

    for (std::size_t it = 0; it < max_iter; ++it) {
        if (std::sqrt(rs) <= tol * bnorm) break;
        const RealVector ap = a.apply(p);
        const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
        if (pap <= 0.0)
            throw std::runtime_error("solve_spd: breakdown, matrix is not positive definite");
        const double alpha = rs / pap;
        for (std::size_t k = 0; k < a.dim; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if ((it + 1) % 64 == 0) {
            // Refresh the residual to cancel accumulated rounding drift.
            const RealVector ax = a.apply(x);
            for (std::size_t k = 0; k < a.dim; ++k) r[k] = b[k] - ax[k];
        }
        const double rs_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
        for (std::size_t k = 0; k < a.dim; ++k) p[k] = r[k] + (rs_new / rs) * p[k];
        rs = rs_new;
    }

    const RealVector ax = a.apply(x);
    double res = 0.0;
    for (std::size_t k = 0; k < a.dim; ++k) {
        const double d = b[k] - ax[k];
        res += d * d;
    }
    if (std::sqrt(res) > 1e-10 * bnorm)
        throw std::runtime_error("solve_spd: did not reach the required residual");
    return x;
}

}  // namespace paraqube
