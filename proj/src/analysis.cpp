#include "nlcavity/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nlcavity/kinetics.hpp"

namespace nlcavity {

namespace {

// Signed excess: the concurrence before its clamp at zero. Negative values
// measure how far below onset the point sits, which gives the refinement a
// smooth surface to climb where the clamped concurrence is identically zero.
double signed_excess(double pump, double k1, double eta, double gamma) {
    SystemParams params;
    params.gamma = gamma;
    params.pump = pump;
    params.k1 = k1;
    params.eta = eta;
    const ManifoldPopulations pops = steady_state_closed_form(params);
    const double pg = pops.p_g, ps1 = pops.p_s1, ps2 = pops.p_s2,
                 po = pops.p_oprime2;
    return 0.5 * (ps1 + ps2) -
           0.5 * std::sqrt((ps2 + 2.0 * po) * (2.0 * po + ps2 + 4.0 * pg + 2.0 * ps1));
}

std::vector<double> log_window(double center, double half_width, double lo,
                               double hi, int count) {
    std::vector<double> out(count);
    const double lc = std::log(center);
    for (int i = 0; i < count; ++i) {
        const double t = lc - half_width + 2.0 * half_width * i / (count - 1);
        out[i] = std::clamp(std::exp(t), lo, hi);
    }
    return out;
}

struct GridPoint {
    double value = 0.0;
    double pi = 0.0;
    double k = 0.0;
};

template <typename Surface>
GridPoint argmax_over(const std::vector<double>& pis, const std::vector<double>& ks,
                      Surface&& surface) {
    GridPoint best{-std::numeric_limits<double>::infinity(), pis.front(), ks.front()};
    for (double p : pis) {
        for (double k : ks) {
            const double v = surface(p, k);
            if (v > best.value) best = {v, p, k};
        }
    }
    return best;
}

void append_csv_row(std::string& out, double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", a, b, c);
    out += buf;
}

}  // namespace

void AxisSpec::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min > 0.0) || !(min < max)) {
        std::ostringstream msg;
        msg << "axis requires 0 < min < max, got [" << min << ", " << max << "]";
        throw std::invalid_argument(msg.str());
    }
    if (count < 2) {
        throw std::invalid_argument("axis needs at least 2 samples, got " +
                                    std::to_string(count));
    }
}

std::vector<double> AxisSpec::samples() const {
    validate();
    std::vector<double> out(static_cast<size_t>(count));
    if (log_spacing) {
        const double la = std::log(min), lb = std::log(max);
        for (int i = 0; i < count; ++i)
            out[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (count - 1));
    } else {
        for (int i = 0; i < count; ++i)
            out[static_cast<size_t>(i)] = min + (max - min) * i / (count - 1);
    }
    out.front() = min;  // pin the endpoints against rounding in exp/log
    out.back() = max;
    return out;
}

void SweepSpec::validate() const {
    pump_range.validate();
    k_range.validate();
    if (!std::isfinite(gamma) || !(gamma > 0.0))
        throw std::invalid_argument("sweep needs gamma > 0");
    if (!std::isfinite(eta) || eta < 0.0)
        throw std::invalid_argument("sweep needs eta >= 0");
}

SweepSpec default_sweep_spec(double eta, double gamma) {
    SweepSpec spec;
    spec.pump_range = {0.05 * gamma, 20.0 * gamma, 200, true};
    spec.k_range = {0.05 * gamma, 20.0 * gamma, 200, true};
    spec.eta = eta;
    spec.gamma = gamma;
    return spec;
}

namespace {

template <bool Parallel>
SweepResult sweep_impl(const SweepSpec& spec) {
    spec.validate();
    const std::vector<double> pis = spec.pump_range.samples();
    const std::vector<double> ks = spec.k_range.samples();
    const int np = spec.pump_range.count;
    const int nk = spec.k_range.count;

    SweepResult result;
    result.spec = spec;
    result.grid.resize(np, nk);

    bool failed = false;
    std::string error;

#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (Parallel)
#endif
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < nk; ++j) {
            try {
                const double s = signed_excess(pis[static_cast<size_t>(i)],
                                               ks[static_cast<size_t>(j)],
                                               spec.eta, spec.gamma);
                result.grid(i, j) = std::max(s, 0.0);
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    if (!failed) {
                        failed = true;
                        std::ostringstream msg;
                        msg << "sweep failed at pi=" << pis[static_cast<size_t>(i)]
                            << ", k=" << ks[static_cast<size_t>(j)] << ": " << e.what();
                        error = msg.str();
                    }
                }
                result.grid(i, j) = 0.0;
            }
        }
    }
    if (failed) throw NumericalError(error);

    result.max_value = result.grid(0, 0);
    result.argmax_pi = pis.front();
    result.argmax_k = ks.front();
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < nk; ++j) {
            if (result.grid(i, j) > result.max_value) {
                result.max_value = result.grid(i, j);
                result.argmax_pi = pis[static_cast<size_t>(i)];
                result.argmax_k = ks[static_cast<size_t>(j)];
            }
        }
    }
    return result;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) { return sweep_impl<true>(spec); }

SweepResult sweep_serial(const SweepSpec& spec) { return sweep_impl<false>(spec); }

std::string emit_table(const SweepResult& result, TableFormat format) {
    const std::vector<double> pis = result.spec.pump_range.samples();
    const std::vector<double> ks = result.spec.k_range.samples();
    if (result.grid.rows() != static_cast<Eigen::Index>(pis.size()) ||
        result.grid.cols() != static_cast<Eigen::Index>(ks.size())) {
        throw std::invalid_argument("sweep grid shape does not match its axis specs");
    }

    if (format == TableFormat::csv) {
        std::string out = "pi,k,concurrence\n";
        out.reserve(out.size() + pis.size() * ks.size() * 60);
        for (size_t i = 0; i < pis.size(); ++i)
            for (size_t j = 0; j < ks.size(); ++j)
                append_csv_row(out, pis[i], ks[j],
                               result.grid(static_cast<int>(i), static_cast<int>(j)));
        return out;
    }

    nlohmann::ordered_json j;
    j["eta"] = result.spec.eta;
    j["gamma"] = result.spec.gamma;
    auto axis = [](const AxisSpec& a) {
        nlohmann::ordered_json obj;
        obj["min"] = a.min;
        obj["max"] = a.max;
        obj["count"] = a.count;
        obj["log_spacing"] = a.log_spacing;
        return obj;
    };
    j["pump_axis"] = axis(result.spec.pump_range);
    j["k_axis"] = axis(result.spec.k_range);
    j["max"] = {{"value", result.max_value},
                {"pi", result.argmax_pi},
                {"k", result.argmax_k}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < pis.size(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (size_t j2 = 0; j2 < ks.size(); ++j2)
            row.push_back(result.grid(static_cast<int>(i), static_cast<int>(j2)));
        rows.push_back(std::move(row));
    }
    j["grid"] = std::move(rows);
    return j.dump(2) + "\n";
}

void SearchBounds::validate() const {
    auto bad = [](double lo, double hi) {
        return !std::isfinite(lo) || !std::isfinite(hi) || !(lo > 0.0) || !(lo < hi);
    };
    if (bad(pi_min, pi_max) || bad(k_min, k_max)) {
        std::ostringstream msg;
        msg << "search box requires 0 < min < max per axis, got pi [" << pi_min
            << ", " << pi_max << "], k [" << k_min << ", " << k_max << "]";
        throw std::invalid_argument(msg.str());
    }
}

SearchBounds default_search_bounds(double gamma) {
    if (!std::isfinite(gamma) || !(gamma > 0.0))
        throw std::invalid_argument("search bounds need gamma > 0");
    return {0.05 * gamma, 10.0 * gamma, 0.05 * gamma, 10.0 * gamma};
}

MaxConcurrenceResult max_concurrence(double eta, double gamma,
                                     std::optional<SearchBounds> bounds,
                                     const SearchOptions& opts) {
    if (!std::isfinite(gamma) || !(gamma > 0.0))
        throw std::invalid_argument("max_concurrence needs gamma > 0");
    if (!std::isfinite(eta) || eta < 0.0)
        throw std::invalid_argument("max_concurrence needs eta >= 0");
    if (opts.coarse_samples < 2)
        throw std::invalid_argument("coarse scan needs at least 2 samples per axis");
    if (!(opts.relative_tol > 0.0) || !(opts.positivity_tol >= 0.0))
        throw std::invalid_argument("search tolerances must be positive");
    const SearchBounds box = bounds ? *bounds : default_search_bounds(gamma);
    box.validate();

    const auto surface = [&](double p, double k) {
        return signed_excess(p, k, eta, gamma);
    };

    AxisSpec pi_axis{box.pi_min, box.pi_max, opts.coarse_samples, true};
    AxisSpec k_axis{box.k_min, box.k_max, opts.coarse_samples, true};
    GridPoint best = argmax_over(pi_axis.samples(), k_axis.samples(), surface);

    // Shrinking 17 x 17 log-space window around the incumbent. The initial
    // half-width spans four coarse cells so the true peak cannot slip between
    // coarse samples.
    double w = std::max(std::log(box.pi_max / box.pi_min),
                        std::log(box.k_max / box.k_min)) /
               (opts.coarse_samples - 1) * 4.0;
    while (w > opts.relative_tol) {
        const GridPoint local =
            argmax_over(log_window(best.pi, w, box.pi_min, box.pi_max, 17),
                        log_window(best.k, w, box.k_min, box.k_max, 17), surface);
        if (local.value > best.value) best = local;
        w *= 0.75;
    }

    MaxConcurrenceResult result;
    result.pi = best.pi;
    result.k = best.k;
    result.surface_zero = !(best.value > opts.positivity_tol);
    result.value = result.surface_zero ? 0.0 : best.value;
    if (result.surface_zero) {
        result.note =
            "concurrence never exceeded the positivity tolerance inside the box; "
            "the reported coordinates maximize the signed excess instead";
    }
    return result;
}

ThresholdResult eta_threshold(double gamma, std::optional<SearchBounds> bounds,
                              double tol, const SearchOptions& opts) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("eta_threshold needs tol > 0");
    const SearchBounds box = bounds ? *bounds : default_search_bounds(gamma);

    const MaxConcurrenceResult at_lo = max_concurrence(1.0, gamma, box, opts);
    MaxConcurrenceResult at_hi = max_concurrence(20.0, gamma, box, opts);
    if (!at_lo.surface_zero || at_hi.surface_zero) {
        std::ostringstream msg;
        msg << "onset is not bracketed by eta in [1, 20] over this box: "
            << "max concurrence " << at_lo.value << " at eta=1, " << at_hi.value
            << " at eta=20";
        throw BracketError(msg.str());
    }

    double lo = 1.0, hi = 20.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const MaxConcurrenceResult at_mid = max_concurrence(mid, gamma, box, opts);
        if (at_mid.surface_zero) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = at_mid;
        }
    }

    ThresholdResult result;
    result.eta_star = 0.5 * (lo + hi);
    result.pi = at_hi.pi;
    result.k = at_hi.k;
    result.c_max = at_hi.value;
    return result;
}

}  // namespace nlcavity
