#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace trilevel {

using Complex = std::complex<double>;

namespace tol {
inline double hermitian = 1e-12;
inline double unitary = 1e-10;
inline double eig_residual = 1e-10;
}  // namespace tol

// Dense row-major N x N complex matrix, stack allocated.
template <std::size_t N>
struct SquareMatrix {
    std::array<Complex, N * N> a{};

    static constexpr std::size_t dim = N;

    Complex& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
    static SquareMatrix zero() { return SquareMatrix{}; }

    SquareMatrix& operator+=(const SquareMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) a[k] += o.a[k];
        return *this;
    }
    SquareMatrix& operator-=(const SquareMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) a[k] -= o.a[k];
        return *this;
    }
    SquareMatrix& operator*=(Complex s) {
        for (auto& x : a) x *= s;
        return *this;
    }
};

template <std::size_t N>
SquareMatrix<N> operator+(SquareMatrix<N> x, const SquareMatrix<N>& y) { return x += y; }
template <std::size_t N>
SquareMatrix<N> operator-(SquareMatrix<N> x, const SquareMatrix<N>& y) { return x -= y; }
template <std::size_t N>
SquareMatrix<N> operator*(SquareMatrix<N> x, Complex s) { return x *= s; }
template <std::size_t N>
SquareMatrix<N> operator*(Complex s, SquareMatrix<N> x) { return x *= s; }

template <std::size_t N>
SquareMatrix<N> operator*(const SquareMatrix<N>& x, const SquareMatrix<N>& y) {
    SquareMatrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            const Complex xik = x(i, k);
            if (xik == Complex{}) continue;
            for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

using Mat3 = SquareMatrix<3>;
using Mat9 = SquareMatrix<9>;

// |i><j| with 1-based level labels, matching sigma_ij notation.
Mat3 sigma(int i, int j);
Mat3 diag(double d1, double d2, double d3);

Mat3 dagger(const Mat3& a);
Mat3 commutator(const Mat3& a, const Mat3& b);
Complex trace(const Mat3& a);
double frobenius_norm(const Mat3& a);
double max_abs(const Mat3& a);
bool is_finite(const Mat3& a);
double hermiticity_defect(const Mat3& a);  // max |A - A^dagger| elementwise

Mat9 dagger(const Mat9& a);
double frobenius_norm(const Mat9& a);
double max_abs(const Mat9& a);
bool is_finite(const Mat9& a);

struct Eigen3 {
    std::array<double, 3> values;  // ascending
    Mat3 vectors;                  // columns
};

// Complex Jacobi diagonalisation. Throws PreconditionError for non-Hermitian input.
Eigen3 herm_eig3(const Mat3& a);

// exp(A dt) by scaling and squaring with a Taylor kernel.
Mat9 expm(const Mat9& a, double dt);

// Row-major vectorisation: vec(A X B) = superop(A, B) vec(X).
Mat9 superop(const Mat3& left, const Mat3& right);

Mat9 liouvillian_hamiltonian(const Mat3& h);
Mat9 liouvillian_jump(const Mat3& l);

// Generator of d vec(rho)/dt for -i[H, rho] + sum_k D[L_k] rho.
template <typename Ops>
Mat9 liouvillian(const Mat3& h, const Ops& ops) {
    Mat9 g = liouvillian_hamiltonian(h);
    for (const Mat3& l : ops) g += liouvillian_jump(l);
    return g;
}

}  // namespace trilevel
