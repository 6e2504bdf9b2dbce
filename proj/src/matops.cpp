#include "trilevel/matops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trilevel/error.hpp"

namespace trilevel {

Mat3 sigma(int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3) throw PreconditionError("sigma: level index out of range");
    Mat3 m;
    m(i - 1, j - 1) = 1.0;
    return m;
}

Mat3 diag(double d1, double d2, double d3) {
    Mat3 m;
    m(0, 0) = d1;
    m(1, 1) = d2;
    m(2, 2) = d3;
    return m;
}

namespace {

template <std::size_t N>
SquareMatrix<N> dagger_n(const SquareMatrix<N>& a) {
    SquareMatrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
    return r;
}

template <std::size_t N>
double frobenius_n(const SquareMatrix<N>& a) {
    double s = 0.0;
    for (const auto& x : a.a) s += std::norm(x);
    return std::sqrt(s);
}

template <std::size_t N>
double max_abs_n(const SquareMatrix<N>& a) {
    double m = 0.0;
    for (const auto& x : a.a) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
bool finite_n(const SquareMatrix<N>& a) {
    return std::all_of(a.a.begin(), a.a.end(),
                       [](const Complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

double one_norm(const Mat9& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 9; ++i) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

}  // namespace

Mat3 dagger(const Mat3& a) { return dagger_n(a); }
Mat9 dagger(const Mat9& a) { return dagger_n(a); }
double frobenius_norm(const Mat3& a) { return frobenius_n(a); }
double frobenius_norm(const Mat9& a) { return frobenius_n(a); }
double max_abs(const Mat3& a) { return max_abs_n(a); }
double max_abs(const Mat9& a) { return max_abs_n(a); }
bool is_finite(const Mat3& a) { return finite_n(a); }
bool is_finite(const Mat9& a) { return finite_n(a); }

Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

Complex trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double hermiticity_defect(const Mat3& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

Eigen3 herm_eig3(const Mat3& in) {
    if (!is_finite(in)) throw PreconditionError("herm_eig3: non-finite input");
    const double scale = std::max(1.0, max_abs(in));
    if (hermiticity_defect(in) > tol::hermitian * scale)
        throw PreconditionError("herm_eig3: input is not Hermitian");

    Mat3 a = in;
    for (std::size_t i = 0; i < 3; ++i) a(i, i) = a(i, i).real();
    Mat3 v = Mat3::identity();

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = p + 1; q < 3; ++q) off += std::norm(a(p, q));
        if (off <= 1e-32 * scale * scale) break;

        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = p + 1; q < 3; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                // Phase rotation makes a(p,q) real, then a real Jacobi rotation annihilates it.
                const Complex ph = std::polar(1.0, -std::arg(a(p, q)));
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double th = (aqq - app) / (2.0 * mag);
                const double t = (th >= 0 ? 1.0 : -1.0) / (std::abs(th) + std::sqrt(th * th + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                Mat3 r = Mat3::identity();
                r(p, p) = c;
                r(p, q) = s;
                r(q, p) = -s * ph;
                r(q, q) = c * ph;

                a = dagger(r) * a * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < 3; ++i) a(i, i) = a(i, i).real();
                v = v * r;
            }
    }

    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    Eigen3 out;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src).real();
        std::size_t big = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (std::abs(v(i, src)) > std::abs(v(big, src)) + 1e-14) big = i;
        const Complex fix = std::polar(1.0, -std::arg(v(big, src)));
        for (std::size_t i = 0; i < 3; ++i) out.vectors(i, k) = v(i, src) * fix;
        out.vectors(big, k) = std::abs(v(big, src));
    }
    return out;
}

Mat9 expm(const Mat9& a, double dt) {
    if (!is_finite(a) || !std::isfinite(dt)) throw PreconditionError("expm: non-finite input");
    Mat9 x = a * Complex(dt);
    const double nrm = one_norm(x);
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    if (squarings > 1000) throw NumericalError("expm: argument norm too large");
    x *= Complex(std::ldexp(1.0, -squarings));

    // ||x|| <= 0.5, so 0.5^k/k! drops below 1e-17 well before k = 24.
    Mat9 result = Mat9::identity();
    Mat9 term = Mat9::identity();
    for (int k = 1; k <= 24; ++k) {
        term = term * x;
        term *= Complex(1.0 / k);
        result += term;
        if (max_abs(term) < 1e-18 * max_abs(result)) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    if (!is_finite(result)) throw NumericalError("expm: overflow");
    return result;
}

Mat9 superop(const Mat3& left, const Mat3& right) {
    Mat9 s;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l) s(3 * i + j, 3 * k + l) = left(i, k) * right(l, j);
    return s;
}

Mat9 liouvillian_hamiltonian(const Mat3& h) {
    const Mat3 id = Mat3::identity();
    return (superop(h, id) - superop(id, h)) * Complex(0.0, -1.0);
}

Mat9 liouvillian_jump(const Mat3& l) {
    const Mat3 id = Mat3::identity();
    const Mat3 ld = dagger(l);
    const Mat3 ldl = ld * l;
    return superop(l, ld) - (superop(ldl, id) + superop(id, ldl)) * Complex(0.5);
}

}  // namespace trilevel
