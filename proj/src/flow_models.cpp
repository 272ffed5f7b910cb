#include "thrifty/flow_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thrifty/errors.hpp"

namespace thrifty::flows {

namespace {

using Violations = std::vector<std::string>;

void check(Violations& out, bool ok, const char* group, const char* boundary, double value) {
    if (ok) return;
    std::ostringstream os;
    os << group << " boundary \"" << boundary << "\" violated (got " << value << ")";
    out.push_back(os.str());
}

void check_nonneg(Violations& out, const char* group, const char* boundary, double value) {
    check(out, std::isfinite(value) && value >= 0.0, group, boundary, value);
}

void throw_if_any(const Violations& v) {
    if (v.empty()) return;
    std::string joined;
    for (const auto& s : v) joined += (joined.empty() ? "" : "; ") + s;
    throw ValidationError(joined);
}

double clamp_probability(double p, const ProbabilityModelConfig& cfg) {
    return std::clamp(p, 0.0, cfg.p_cap);
}

}  // namespace

Violations ProbabilityModelConfig::boundary_violations() const {
    Violations v;
    check_nonneg(v, "probability model", "sigma >= 0", sigma);
    check_nonneg(v, "probability model", "kappa_coll >= 0", kappa_coll);
    check_nonneg(v, "probability model", "kappa_ohear >= 0", kappa_ohear);
    check_nonneg(v, "probability model", "kappa_idle >= 0", kappa_idle);
    check_nonneg(v, "probability model", "kappa_loss >= 0", kappa_loss);
    check(v, std::isfinite(area) && area > 0.0, "probability model", "area > 0", area);
    // Three local probabilities share the cap; 3 * 0.33 < 1 keeps the local denominator positive.
    check(v, std::isfinite(p_cap) && p_cap >= 0.0 && p_cap <= 0.33, "probability model",
          "0 <= p_cap <= 0.33", p_cap);
    return v;
}

void ProbabilityModelConfig::validate() const { throw_if_any(boundary_violations()); }

Violations IndividualParams::boundary_violations() const {
    Violations v;
    check(v, std::isfinite(r_sense) && r_sense > 0.0, "individual", "r_sense > 0", r_sense);
    check_nonneg(v, "individual", "g_sense >= 0", g_sense);
    check_nonneg(v, "individual", "b_os >= 0", b_os);
    check_nonneg(v, "individual", "b_sec >= 0", b_sec);
    check_nonneg(v, "individual", "b_store >= 0", b_store);
    return v;
}

void IndividualParams::validate() const { throw_if_any(boundary_violations()); }

Violations LocalParams::boundary_violations() const {
    Violations v;
    check(v, std::isfinite(n) && n >= 1.0, "local", "n >= 1", n);
    check(v, std::isfinite(net_dens) && net_dens >= 1.0, "local", "net_dens >= 1", net_dens);
    check_nonneg(v, "local", "g_tx >= 0", g_tx);
    check_nonneg(v, "local", "r_tx >= 0", r_tx);
    check(v, std::isfinite(d_ij) && d_ij > 0.0 && d_ij <= r_tx, "local", "0 < d_ij <= r_tx", d_ij);
    check_nonneg(v, "local", "idle_power >= 0", idle_power);
    check_nonneg(v, "local", "b_mon >= 0", b_mon);
    check_nonneg(v, "local", "b_sec >= 0", b_sec);
    check_nonneg(v, "local", "b_ohead >= 0", b_ohead);
    check_nonneg(v, "local", "b_retx >= 0", b_retx);
    return v;
}

void LocalParams::validate() const { throw_if_any(boundary_violations()); }

Violations GlobalParams::boundary_violations() const {
    Violations v;
    check_nonneg(v, "global", "D >= 0", dist_to_sink);
    check_nonneg(v, "global", "r_tx >= 0", r_tx);
    check(v, std::isfinite(net_dens) && net_dens >= 1.0, "global", "net_dens >= 1", net_dens);
    check_nonneg(v, "global", "b_sec >= 0", b_sec);
    check_nonneg(v, "global", "b_topo >= 0", b_topo);
    check_nonneg(v, "global", "b_rout >= 0", b_rout);
    check_nonneg(v, "global", "b_ohead >= 0", b_ohead);
    return v;
}

void GlobalParams::validate() const { throw_if_any(boundary_violations()); }

Violations EnvironmentParams::boundary_violations() const {
    Violations v;
    check_nonneg(v, "environment", "H_i >= 0", harvested_power);
    check_nonneg(v, "environment", "b_ph >= 0", b_ph);
    check_nonneg(v, "environment", "b_sec >= 0", b_sec);
    return v;
}

void EnvironmentParams::validate() const { throw_if_any(boundary_violations()); }

Violations SinkParams::boundary_violations() const {
    Violations v;
    check_nonneg(v, "sink", "b_ohead >= 0", b_ohead);
    check_nonneg(v, "sink", "b_sec >= 0", b_sec);
    return v;
}

void SinkParams::validate() const { throw_if_any(boundary_violations()); }

double p_sense(double r_sense, double g_sense, const ProbabilityModelConfig& cfg) {
    if (!(std::isfinite(r_sense) && r_sense > 0.0)) throw ValidationError("p_sense: r_sense > 0 required");
    if (!(std::isfinite(g_sense) && g_sense >= 0.0)) throw ValidationError("p_sense: g_sense >= 0 required");
    const double coverage = cfg.sigma * r_sense * r_sense;
    return clamp_probability(coverage / (coverage + g_sense + 1.0), cfg);
}

double p_coll(double n, double g_tx, double net_dens, const ProbabilityModelConfig& cfg) {
    if (!(n >= 1.0)) throw ValidationError("p_coll: n >= 1 required");
    if (!(g_tx >= 0.0)) throw ValidationError("p_coll: g_tx >= 0 required");
    if (!(net_dens >= 1.0)) throw ValidationError("p_coll: net_dens >= 1 required");
    return clamp_probability(cfg.kappa_coll * n * g_tx * net_dens, cfg);
}

double p_ohear(double n, double net_dens, double r_tx, const ProbabilityModelConfig& cfg) {
    if (!(n >= 1.0)) throw ValidationError("p_ohear: n >= 1 required");
    if (!(net_dens >= 1.0)) throw ValidationError("p_ohear: net_dens >= 1 required");
    if (!(r_tx >= 0.0)) throw ValidationError("p_ohear: r_tx >= 0 required");
    return clamp_probability(cfg.kappa_ohear * n * r_tx * r_tx / cfg.area, cfg);
}

double p_idle(double n, const ProbabilityModelConfig& cfg) {
    if (!(n >= 1.0)) throw ValidationError("p_idle: n >= 1 required");
    return clamp_probability(cfg.kappa_idle / (n + 1.0), cfg);
}

double p_hop(double net_dens, const ProbabilityModelConfig& cfg) {
    if (!(net_dens >= 1.0)) throw ValidationError("p_hop: net_dens >= 1 required");
    return std::min(0.5, cfg.kappa_loss / net_dens);
}

double loss_over_hops(double p_hop, int hops) {
    if (hops < 0) throw ValidationError("loss_over_hops: negative hop count");
    return 1.0 - std::pow(1.0 - p_hop, hops);
}

double p_pktls(double dist_to_sink, double r_tx, double net_dens, const ProbabilityModelConfig& cfg) {
    if (!(std::isfinite(dist_to_sink) && dist_to_sink >= 0.0))
        throw ValidationError("p_pktls: D >= 0 required");
    if (dist_to_sink == 0.0) return 0.0;
    if (!(r_tx > 0.0)) throw ValidationError("p_pktls: sink unreachable with r_tx = 0");
    const int hops = static_cast<int>(std::ceil(dist_to_sink / r_tx));
    return clamp_probability(loss_over_hops(p_hop(net_dens, cfg), hops), cfg);
}

double self_referential_total(double base, double p) {
    const double denom = 1.0 - p;
    if (!(denom >= kDivisionGuard)) {
        std::ostringstream os;
        os << "closed-form flow is singular: probability sum " << p << " leaves denominator " << denom;
        throw SingularityError(os.str());
    }
    return base / denom;
}

IndividualFlow individual_flow_at(double p_sense, double b_os, double b_sec) {
    IndividualFlow f;
    f.total = self_referential_total(b_os + b_sec, p_sense);
    f.sensed = p_sense * f.total;
    return f;
}

LocalFlow local_flow_at(double p_coll, double p_ohear, double p_idle, double b_sec, double b_mon,
                        double b_ohead) {
    LocalFlow f;
    f.total = self_referential_total(b_sec + b_mon + b_ohead, p_coll + p_ohear + p_idle);
    f.coll = p_coll * f.total;
    f.ohear = p_ohear * f.total;
    f.idle = p_idle * f.total;
    return f;
}

GlobalFlow global_flow_at(double p_pktls, double b_sec, double b_topo, double b_rout, double b_ohead) {
    GlobalFlow f;
    f.total = self_referential_total(b_sec + b_topo + b_rout + b_ohead, p_pktls);
    f.pktls = p_pktls * f.total;
    return f;
}

IndividualFlow individual_flow(const IndividualParams& params, const ProbabilityModelConfig& cfg) {
    params.validate();
    return individual_flow_at(p_sense(params.r_sense, params.g_sense, cfg), params.b_os, params.b_sec);
}

LocalFlow local_flow(const LocalParams& params, const ProbabilityModelConfig& cfg) {
    params.validate();
    return local_flow_at(p_coll(params.n, params.g_tx, params.net_dens, cfg),
                         p_ohear(params.n, params.net_dens, params.r_tx, cfg), p_idle(params.n, cfg),
                         params.b_sec, params.b_mon, params.b_ohead);
}

GlobalFlow global_flow(const GlobalParams& params, const ProbabilityModelConfig& cfg) {
    params.validate();
    return global_flow_at(p_pktls(params.dist_to_sink, params.r_tx, params.net_dens, cfg), params.b_sec,
                          params.b_topo, params.b_rout, params.b_ohead);
}

double environment_flow(const EnvironmentParams& params) {
    params.validate();
    return params.b_sec + params.b_ph;
}

double sink_flow(const SinkParams& params) {
    params.validate();
    return params.b_sec + params.b_ohead;
}

}  // namespace thrifty::flows
