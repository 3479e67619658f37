#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace eot {

// Symmetric d x d matrix, d in {1, 2, 3}. Only the upper triangle is
// stored, so symmetry is exact by construction. Entry order for d = 3:
// (0,0) (1,1) (2,2) (0,1) (0,2) (1,2).
class SymMat {
public:
    SymMat() : SymMat(1) {}
    explicit SymMat(int d) : d_(d), a_{} {
        if (d < 1 || d > 3) throw std::invalid_argument("SymMat: dimension must be 1, 2 or 3");
    }

    static SymMat zero(int d) { return SymMat(d); }
    static SymMat identity(int d) {
        SymMat m(d);
        for (int i = 0; i < d; ++i) m.a_[i] = 1.0;
        return m;
    }
    // Builds diag(v), dimension = v.size().
    static SymMat diag(std::initializer_list<double> v) {
        SymMat m(static_cast<int>(v.size()));
        int i = 0;
        for (double x : v) m.a_[i++] = x;
        return m;
    }

    int dim() const { return d_; }

    double operator()(int i, int j) const { return a_[slot(i, j)]; }
    void set(int i, int j, double v) { a_[slot(i, j)] = v; }
    void add(int i, int j, double v) { a_[slot(i, j)] += v; }

    SymMat& operator+=(const SymMat& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    SymMat& operator-=(const SymMat& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    SymMat& operator*=(double s) {
        for (double& x : a_) x *= s;
        return *this;
    }

    friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
    friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
    friend SymMat operator*(SymMat a, double s) { return a *= s; }
    friend SymMat operator*(double s, SymMat a) { return a *= s; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < d_; ++i) t += a_[i];
        return t;
    }
    // Frobenius inner product tr(A B); off-diagonal entries count twice.
    double dot(const SymMat& o) const {
        double s = 0.0;
        for (int i = 0; i < d_; ++i) s += a_[i] * o.a_[i];
        for (int k = 3; k < 6; ++k) s += 2.0 * a_[k] * o.a_[k];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double max_abs() const {
        double m = 0.0;
        for (double x : a_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    static int slot(int i, int j) {
        if (i > j) std::swap(i, j);
        if (i == j) return i;
        if (i == 0) return j == 1 ? 3 : 4;
        return 5;  // (1,2)
    }

    int d_;
    std::array<double, 6> a_;
};

// Spectral decomposition a = sum_k val[k] * vec[k] vec[k]^T with
// eigenvalues sorted descending and orthonormal eigenvectors.
struct SymEigen {
    int d = 1;
    std::array<double, 3> val{};
    std::array<std::array<double, 3>, 3> vec{};
};

// Closed-form characteristic-polynomial roots for d <= 3; falls back to
// Jacobi rotations when the roots are ill-conditioned.
SymEigen sym_eigen(const SymMat& a);

// Reconstructs sum_k e.val[k] * vec[k] vec[k]^T.
SymMat sym_from_eigen(const SymEigen& e);

// Nearest (Frobenius) positive semidefinite matrix.
SymMat psd_projection(const SymMat& a);

double min_eigenvalue(const SymMat& a);
double max_eigenvalue(const SymMat& a);

}  // namespace eot
