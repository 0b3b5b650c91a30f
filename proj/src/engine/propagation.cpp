#include "prft/engine.hpp"

#include <cmath>
#include <vector>

namespace prft {

namespace {

// Maps are stored as their deviation from the identity, D = M - I, so that the
// small per-step increments keep full relative precision under composition.

// One classical RK4 step of d/dt v = L v: sum_{1<=k<=4} (dt L)^k / k!.
CMat rk4_step_deviation(const CMat& L, double dt) {
    const CMat hL = dt * L;
    CMat term = hL;
    CMat step = term;
    for (int k = 2; k <= 4; ++k) {
        term = term * hL / static_cast<double>(k);
        step += term;
    }
    return step;
}

// (I + a)(I + b) - I.
CMat compose(const CMat& a, const CMat& b) { return a + b + a * b; }

// m-fold composition of the step by binary powering.
CMat power_deviation(CMat base, long long m) {
    CMat result = CMat::Zero(base.rows(), base.cols());
    while (m > 0) {
        if (m & 1) result = compose(result, base);
        m >>= 1;
        if (m > 0) base = compose(base, base);
    }
    return result;
}

// log(1 + w) without cancellation for small complex w.
cplx log1p_complex(cplx w) {
    return {0.5 * std::log1p(2.0 * w.real() + std::norm(w)), std::atan2(w.imag(), 1.0 + w.real())};
}

} // namespace

PropagationSettings default_propagation_settings(const TiltedGenerator& L) {
    if (!(L.min_decay > 0))
        throw DomainError("propagation: a positive decay rate is required to reach the long-time limit");
    PropagationSettings s;
    s.dt = 0.01 / L.max_rate;
    s.burn_in = 40.0 / L.min_decay;
    s.window = 10.0 / L.min_decay;
    return s;
}

PropagationResult dominant_eigenvalue_prop(const TiltedGenerator& L, const PropagationSettings& s) {
    if (!(s.dt > 0) || !(s.window > 0) || !(s.burn_in >= 0) || s.samples < 3)
        throw DomainError("propagation: invalid time grid");
    const int d = L.dim;
    const long long window_steps = std::max<long long>(1, std::llround(s.window / s.dt));
    const long long block = std::max<long long>(1, window_steps / s.samples);
    const long long window_blocks = std::max<long long>(2, window_steps / block);
    const long long burn_steps = std::llround(s.burn_in / s.dt);
    const double block_time = static_cast<double>(block) * s.dt;

    const CMat step = rk4_step_deviation(L.matrix, s.dt);
    const CMat block_map = power_deviation(step, block);

    CVec v = CVec::Zero(d * d);
    for (int i = 0; i < d; ++i) v[i + i * d] = 1.0 / d;
    auto trace_of = [&](const CVec& x) {
        cplx t = 0.0;
        for (int i = 0; i < d; ++i) t += x[i + i * d];
        return t;
    };

    v += power_deviation(step, burn_steps) * v;
    cplx log_scale = std::log(trace_of(v));
    v /= trace_of(v);

    std::vector<double> ts;
    std::vector<cplx> ys;
    ts.reserve(window_blocks + 1);
    ys.reserve(window_blocks + 1);
    for (long long b = 0; b <= window_blocks; ++b) {
        ts.push_back(static_cast<double>(b) * block_time);
        ys.push_back(log_scale);
        const CVec dv = block_map * v;
        const cplx growth = trace_of(dv);
        if (!std::isfinite(growth.real()) || !std::isfinite(growth.imag()) || std::abs(1.0 + growth) == 0.0)
            throw NumericalError("propagation: trace left the representable range");
        log_scale += log1p_complex(growth);
        v = (v + dv) / (1.0 + growth);
    }

    const double n = static_cast<double>(ts.size());
    double tm = 0.0;
    cplx ym = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0.0;
    cplx sty = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        sty += (ts[i] - tm) * (ys[i] - ym);
    }
    PropagationResult r;
    r.lambda = sty / stt;
    double ss = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) ss += std::norm(ys[i] - ym - r.lambda * (ts[i] - tm));
    const double span = static_cast<double>(window_blocks) * block_time;
    r.residual = std::sqrt(ss / n) / (1.0 + std::abs(r.lambda) * span);
    r.converged = r.residual <= 1e-6;
    return r;
}

} // namespace prft
