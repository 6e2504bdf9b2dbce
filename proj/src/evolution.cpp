#include "trilevel/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trilevel/error.hpp"
#include "trilevel/ode.hpp"

namespace trilevel {

void validate(const PropagatorSettings& s) {
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0)) throw PreconditionError("propagator tolerances must be positive");
    if (!(s.max_step > 0.0)) throw PreconditionError("max_step must be positive");
    if (s.method != Method::adaptive_rk && s.n_steps == 0) throw PreconditionError("n_steps must be positive");
    if (s.samples < 2) throw PreconditionError("at least two output samples are required");
}

const char* to_string(Method m) {
    switch (m) {
        case Method::adaptive_rk: return "adaptive_rk";
        case Method::fixed_rk4: return "fixed_rk4";
        case Method::expm_oracle: return "expm_oracle";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    if (name == "adaptive_rk" || name == "dopri5") return Method::adaptive_rk;
    if (name == "fixed_rk4" || name == "rk4") return Method::fixed_rk4;
    if (name == "expm_oracle" || name == "expm") return Method::expm_oracle;
    throw PreconditionError("unknown method: " + name);
}

bool InvariantReport::within(double factor) const {
    return max_trace_error <= factor * tol::trace && max_hermiticity_defect <= factor * tol::rho_hermitian &&
           min_eigenvalue >= -factor * tol::positivity && min_purity >= 1.0 / 3.0 - factor * tol::purity &&
           max_purity <= 1.0 + factor * tol::purity;
}

std::vector<double> sample_times(double horizon, std::size_t samples) {
    if (samples < 2) throw PreconditionError("at least two output samples are required");
    std::vector<double> ts(samples);
    for (std::size_t k = 0; k < samples; ++k)
        ts[k] = horizon * static_cast<double>(k) / static_cast<double>(samples - 1);
    ts.back() = horizon;
    return ts;
}

std::array<double, 9> pack(const Mat3& m) {
    return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(0, 1).real(), m(0, 1).imag(),
            m(0, 2).real(), m(0, 2).imag(), m(1, 2).real(), m(1, 2).imag()};
}

Mat3 unpack(const std::array<double, 9>& v) {
    Mat3 m;
    m(0, 0) = v[0];
    m(1, 1) = v[1];
    m(2, 2) = v[2];
    m(0, 1) = {v[3], v[4]};
    m(0, 2) = {v[5], v[6]};
    m(1, 2) = {v[7], v[8]};
    m(1, 0) = std::conj(m(0, 1));
    m(2, 0) = std::conj(m(0, 2));
    m(2, 1) = std::conj(m(1, 2));
    return m;
}

namespace {

double min_eigenvalue(const Mat3& rho) {
    const Mat3 sym = (rho + dagger(rho)) * Complex(0.5);
    return herm_eig3(sym).values[0];
}

void record(InvariantReport& rep, const Sample& s) {
    rep.max_trace_error = std::max(rep.max_trace_error, std::abs(trace(s.rho) - 1.0));
    rep.max_hermiticity_defect = std::max(rep.max_hermiticity_defect, hermiticity_defect(s.rho));
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eigenvalue(s.rho));
    rep.min_purity = std::min(rep.min_purity, s.purity);
    rep.max_purity = std::max(rep.max_purity, s.purity);
    if (!rep.within(tol::breach_factor))
        throw NumericalError("density-matrix invariant breached beyond " + std::to_string(tol::breach_factor) +
                                 "x tolerance",
                             s.t);
}

void finish(Trajectory& tr, const PulseSchedule& s, double t, const Mat3& rho, const Mat3* R) {
    tr.samples.push_back(make_sample(s, t, rho, R));
    record(tr.invariants, tr.samples.back());
}

Trajectory bare_rk(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& rho0,
                   const PropagatorSettings& ps) {
    const Dissipator diss(c, r);
    auto rhs = [&](double t, const ode::State<9>& y) {
        const Mat3 rho = unpack(y);
        const Mat3 h = hamiltonian(s, t);
        Mat3 d = commutator(h, rho) * Complex(0.0, -1.0);
        if (!diss.empty()) d += diss.apply(rho);
        return pack(d);
    };
    Trajectory tr;
    const auto ts = sample_times(s.horizon, ps.samples);
    auto obs = [&](double t, const ode::State<9>& y) { finish(tr, s, t, unpack(y), nullptr); };
    ode::Stats st;
    if (ps.method == Method::adaptive_rk) {
        ode::Options o;
        o.rel_tol = ps.rel_tol;
        o.abs_tol = ps.abs_tol;
        o.max_step = ps.max_step;
        st = ode::dopri5<9>(rhs, 0.0, pack(rho0), ts, o, obs);
    } else {
        st = ode::rk4<9>(rhs, 0.0, pack(rho0), s.horizon, ps.n_steps, ts, obs);
    }
    tr.steps = st.accepted;
    tr.rhs_calls = st.rhs_calls;
    return tr;
}

}  // namespace

void check_density_matrix(const Mat3& rho, const char* who) {
    const std::string w(who);
    if (!is_finite(rho)) throw PreconditionError(w + ": initial state is not finite");
    if (hermiticity_defect(rho) > tol::rho_hermitian) throw PreconditionError(w + ": initial state is not Hermitian");
    if (std::abs(trace(rho) - 1.0) > tol::trace) throw PreconditionError(w + ": initial state does not have unit trace");
    if (min_eigenvalue(rho) < -tol::positivity) throw PreconditionError(w + ": initial state is not positive");
}

Sample make_sample(const PulseSchedule& s, double t, const Mat3& rho, const Mat3* R) {
    const DriveSample d = s.sample(t);
    const AdiabaticFrame f = frame(d, s.field_free());
    Sample out;
    out.t = t;
    out.rho = rho;
    out.R = R ? *R : to_adiabatic(f, rho);
    out.purity = (rho * rho)(0, 0).real() + (rho * rho)(1, 1).real() + (rho * rho)(2, 2).real();
    for (std::size_t k = 0; k < 3; ++k) {
        out.bare_populations[k] = rho(k, k).real();
        out.adiabatic_populations[k] = out.R(k, k).real();
    }
    out.theta = f.theta;
    out.phi = f.phi;
    out.lambda = f.lambda;
    out.pump = d.pump;
    out.stokes = d.stokes;
    out.detuning = d.detuning;
    out.floored = d.floored;
    return out;
}

Trajectory propagate_bare(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& rho0,
                          const PropagatorSettings& settings) {
    validate(settings);
    check_density_matrix(rho0, "propagate_bare");
    if (settings.method == Method::expm_oracle)
        return propagate_expm_oracle(c, r, s, rho0, settings.n_steps, settings.samples);
    return bare_rk(c, r, s, rho0, settings);
}

// The state is the interaction-picture matrix Rt = P^dagger R P with P = diag(1, e^{-i phi2}, e^{-i phi3}),
// d phi_k/dt = lambda_k, plus the two phases. The fast diagonal rotation is then carried exactly.
Trajectory propagate_adiabatic(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& R0,
                               const PropagatorSettings& settings) {
    validate(settings);
    check_density_matrix(R0, "propagate_adiabatic");
    const Dissipator diss(c, r);
    const bool free = s.field_free();

    auto phases = [](const ode::State<11>& y) {
        Mat3 p;
        p(0, 0) = 1.0;
        p(1, 1) = std::polar(1.0, -y[9]);
        p(2, 2) = std::polar(1.0, -y[10]);
        return p;
    };
    auto split = [](const ode::State<11>& y) {
        std::array<double, 9> v;
        std::copy_n(y.begin(), 9, v.begin());
        return unpack(v);
    };
    auto rhs = [&](double t, const ode::State<11>& y) {
        const AdiabaticFrame f = frame(s.sample(t), free);
        const Mat3 p = phases(y);
        const Mat3 pd = dagger(p);
        const Mat3 R = p * split(y) * pd;
        Mat3 d = R * f.F - f.F * R;
        if (!diss.empty()) d += diss.apply_adiabatic(f.U, R);
        const auto v = pack(pd * d * p);
        ode::State<11> out;
        std::copy(v.begin(), v.end(), out.begin());
        out[9] = f.lambda[1];
        out[10] = f.lambda[2];
        return out;
    };

    ode::State<11> y0{};
    const auto v0 = pack(R0);
    std::copy(v0.begin(), v0.end(), y0.begin());

    Trajectory tr;
    const auto ts = sample_times(s.horizon, settings.samples);
    auto obs = [&](double t, const ode::State<11>& y) {
        const Mat3 p = phases(y);
        const Mat3 R = p * split(y) * dagger(p);
        const AdiabaticFrame f = frame(s.sample(t), free);
        finish(tr, s, t, to_bare(f, R), &R);
    };

    ode::Stats st;
    if (settings.method == Method::fixed_rk4) {
        st = ode::rk4<11>(rhs, 0.0, y0, s.horizon, settings.n_steps, ts, obs);
    } else if (settings.method == Method::adaptive_rk) {
        ode::Options o;
        o.rel_tol = settings.rel_tol;
        o.abs_tol = settings.abs_tol;
        o.max_step = settings.max_step;
        ode::State<11> cap;
        cap.fill(std::numeric_limits<double>::infinity());
        cap[9] = cap[10] = 1.0;
        st = ode::dopri5<11>(rhs, 0.0, y0, ts, o, obs, &cap);
    } else {
        throw PreconditionError("propagate_adiabatic: the expm oracle is bare-basis only");
    }
    tr.steps = st.accepted;
    tr.rhs_calls = st.rhs_calls;
    return tr;
}

Trajectory propagate_expm_oracle(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& rho0,
                                 std::size_t n_slices, std::size_t samples) {
    if (n_slices < 1) throw PreconditionError("propagate_expm_oracle: n_slices must be >= 1");
    check_density_matrix(rho0, "propagate_expm_oracle");
    const auto ops = lindblad_ops(c, r);
    const auto ts = sample_times(s.horizon, samples);

    std::vector<double> breaks(ts);
    for (std::size_t k = 0; k <= n_slices; ++k)
        breaks.push_back(s.horizon * static_cast<double>(k) / static_cast<double>(n_slices));
    std::sort(breaks.begin(), breaks.end());
    const double eps = 1e-13 * std::max(1.0, s.horizon);
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [&](double a, double b) { return b - a <= eps; }),
                 breaks.end());

    std::array<Complex, 9> v{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) v[3 * i + j] = rho0(i, j);
    auto as_matrix = [&] {
        Mat3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = v[3 * i + j];
        return m;
    };

    Trajectory tr;
    std::size_t next = 0;
    auto emit = [&](double t) {
        while (next < ts.size() && std::abs(ts[next] - t) <= eps) {
            finish(tr, s, ts[next], as_matrix(), nullptr);
            ++next;
        }
    };
    emit(breaks.front());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const Mat9 gen = liouvillian(hamiltonian(s, 0.5 * (a + b)), ops);
        const Mat9 step = expm(gen, b - a);
        std::array<Complex, 9> w{};
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) w[i] += step(i, j) * v[j];
        v = w;
        ++tr.steps;
        emit(b);
    }
    return tr;
}

Mat3 closed_system_solution(const AdiabaticFrame& frame0, const Mat3& R0, double t) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            r(i, j) = R0(i, j) * std::polar(1.0, -(frame0.lambda[i] - frame0.lambda[j]) * t);
    return r;
}

}  // namespace trilevel
