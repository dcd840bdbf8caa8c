#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdls/matrix.hpp"

namespace rdls {

// Singular values below kRankRelTol * sigma_max count as zero. This single
// knob governs numerical rank everywhere: projectors, kernels, affine sets.
constexpr double kRankRelTol = 1e-10;

// Rank-revealing orthogonal factorization of an m x n matrix A:
//   A * V = W with V orthogonal (n x n) and the columns of W mutually
//   orthogonal; sigma_j = ||W col j||, sorted descending.
// Columns of V beyond the numerical rank span kernel(A); the leading ones
// span the row space.
struct RankFactorization {
    std::size_t rank = 0;
    Matrix row_space_basis;         // n x rank, orthonormal columns
    Matrix kernel_basis;            // n x (n - rank), orthonormal columns
    std::vector<double> singular_values;  // length n, descending
    Matrix right_vectors;           // V, n x n
    Matrix scaled_left;             // W = A*V, m x n (column j has norm sigma_j)
};

inline RankFactorization rank_factor(const Matrix& a, double rel_tol = kRankRelTol) {
    if (!a.all_finite()) throw InvalidInputError("rank_factor: non-finite entries");
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    Matrix w = a;
    Matrix v = Matrix::identity(n);

    // One-sided Jacobi: rotate column pairs of W until all pairs are
    // orthogonal; V accumulates the rotations.
    const double ortho_tol = 1e-15;
    const int max_sweeps = 120;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    app += wp * wp;
                    aqq += wq * wq;
                    apq += wp * wq;
                }
                if (apq * apq <= ortho_tol * ortho_tol * app * aqq) continue;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
                rotated = true;
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    RankFactorization f;
    f.singular_values.resize(n);
    f.right_vectors = Matrix(n, n);
    f.scaled_left = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        f.singular_values[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) f.right_vectors(i, j) = v(i, src);
        for (std::size_t i = 0; i < m; ++i) f.scaled_left(i, j) = w(i, src);
    }

    const double sigma_max = n == 0 ? 0.0 : f.singular_values[0];
    const double thresh = rel_tol * sigma_max;
    std::size_t r = 0;
    while (r < n && f.singular_values[r] > thresh && f.singular_values[r] > 0.0) ++r;
    f.rank = r;

    f.row_space_basis = Matrix(n, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) f.row_space_basis(i, j) = f.right_vectors(i, j);
    f.kernel_basis = Matrix(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) f.kernel_basis(i, j - r) = f.right_vectors(i, j);
    return f;
}

// x = A^+ b from a factorization: x = sum_{j < rank} V_j (W_j . b) / sigma_j^2.
inline Vector pinv_apply(const RankFactorization& f, const Vector& b) {
    const std::size_t n = f.right_vectors.rows();
    if (b.size() != f.scaled_left.rows()) throw InvalidInputError("pinv_apply: dimension mismatch");
    Vector x(n, 0.0);
    for (std::size_t j = 0; j < f.rank; ++j) {
        double wb = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) wb += f.scaled_left(i, j) * b[i];
        const double coeff = wb / (f.singular_values[j] * f.singular_values[j]);
        for (std::size_t i = 0; i < n; ++i) x[i] += coeff * f.right_vectors(i, j);
    }
    return x;
}

// Minimizer of ||Ax - b||_2 with the smallest 2-norm among minimizers.
inline Vector min_norm_ls_solve(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) throw InvalidInputError("min_norm_ls_solve: b length != rows of A");
    if (!all_finite(b)) throw InvalidInputError("min_norm_ls_solve: non-finite rhs");
    return pinv_apply(rank_factor(a), b);
}

// Orthogonal projector onto kernel(A): P = K K' with K an orthonormal kernel
// basis; equals I - A^+ A.
inline Matrix kernel_projector(const Matrix& a) {
    const RankFactorization f = rank_factor(a);
    const std::size_t n = a.cols();
    const Matrix& k = f.kernel_basis;
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < k.cols(); ++c) s += k(i, c) * k(j, c);
            p(i, j) = s;
        }
    return p;
}

// Affine solution set {x : G x = h} stored as a min-norm particular point
// plus an orthonormal basis of the direction subspace (kernel of G).
struct AffineSet {
    std::size_t dim = 0;
    Vector point;
    Matrix kernel_basis;  // dim x m, orthonormal columns, m >= 0

    std::size_t kernel_dim() const { return kernel_basis.cols(); }

    // || (I - K K')(x - point) ||_2
    double distance_to(const Vector& x) const {
        Vector delta = x - point;
        for (std::size_t j = 0; j < kernel_basis.cols(); ++j) {
            double c = 0.0;
            for (std::size_t i = 0; i < dim; ++i) c += kernel_basis(i, j) * delta[i];
            for (std::size_t i = 0; i < dim; ++i) delta[i] -= c * kernel_basis(i, j);
        }
        return norm2(delta);
    }

    bool contains(const Vector& x, double tol) const { return distance_to(x) <= tol; }
};

// Builds the affine set from a (symmetric PSD) normal-equation pair (G, h).
// A residual beyond consistency_tol signals the input was not a
// normal-equation system and raises InconsistentSystemError.
inline AffineSet affine_set_from_normal_eqs(const Matrix& g, const Vector& h,
                                            double consistency_tol = 1e-8) {
    if (g.rows() != g.cols()) throw InvalidInputError("affine_set_from_normal_eqs: G not square");
    if (h.size() != g.rows()) throw InvalidInputError("affine_set_from_normal_eqs: h length != d");
    if (!g.all_finite() || !all_finite(h))
        throw InvalidInputError("affine_set_from_normal_eqs: non-finite input");
    const double asym = (g - g.transposed()).max_abs();
    if (asym > 1e-6 * std::max(1.0, g.max_abs()))
        throw InvalidInputError("affine_set_from_normal_eqs: G is not symmetric");

    const RankFactorization f = rank_factor(g);
    Vector x = pinv_apply(f, h);
    const Vector residual = g.apply(x) - h;
    const double sigma_max = f.singular_values.empty() ? 0.0 : f.singular_values[0];
    const double scale = std::max({1.0, norm2(h), sigma_max * norm2(x)});
    if (norm2(residual) > consistency_tol * scale)
        throw InconsistentSystemError("affine_set_from_normal_eqs: inconsistent system (residual " +
                                      std::to_string(norm2(residual)) + ")");
    AffineSet set;
    set.dim = g.rows();
    set.point = std::move(x);
    set.kernel_basis = f.kernel_basis;
    return set;
}

// True iff the two sets coincide: each particular point lies in the other
// set and the kernel bases span the same subspace. Bases are never compared
// entry-wise, only their spans.
inline bool affine_sets_equal(const AffineSet& s1, const AffineSet& s2, double tol) {
    if (s1.dim != s2.dim) throw InvalidInputError("affine_sets_equal: ambient dimension mismatch");
    if (s1.kernel_dim() != s2.kernel_dim()) return false;
    if (s1.distance_to(s2.point) > tol) return false;
    if (s2.distance_to(s1.point) > tol) return false;

    const auto span_residual = [](const Matrix& ka, const Matrix& kb) {
        // || K_a - K_b K_b' K_a ||_F : zero iff span(K_a) subset of span(K_b)
        double s = 0.0;
        for (std::size_t j = 0; j < ka.cols(); ++j) {
            Vector col = ka.col(j);
            for (std::size_t c = 0; c < kb.cols(); ++c) {
                double proj = 0.0;
                for (std::size_t i = 0; i < col.size(); ++i) proj += kb(i, c) * col[i];
                for (std::size_t i = 0; i < col.size(); ++i) col[i] -= proj * kb(i, c);
            }
            s += dot(col, col);
        }
        return std::sqrt(s);
    };
    return span_residual(s1.kernel_basis, s2.kernel_basis) <= tol &&
           span_residual(s2.kernel_basis, s1.kernel_basis) <= tol;
}

}  // namespace rdls
