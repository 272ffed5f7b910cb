#pragma once

// Per-constituent packet-flow closed forms.
//
// Several constituents contain a flow that is a probability times the
// constituent total itself (sensed packets, collisions, overhearing, idle
// listening, packet loss). Solving total = base + p * total gives
// total = base / (1 - p); the helpers here evaluate those closed forms and
// the probability models that feed them.

#include <string>
#include <vector>

namespace thrifty::flows {

/// Denominators of the self-referential closed forms below this are rejected.
inline constexpr double kDivisionGuard = 1e-9;

/// Coefficients of the five conditional-probability models.
struct ProbabilityModelConfig {
    double sigma = 0.01;        ///< sensing coverage coefficient, 1/m^2
    double kappa_coll = 0.03;   ///< collision rate per (neighbor * second * node)
    double kappa_ohear = 0.1;   ///< overhearing rate per unit of coverage overlap
    double kappa_idle = 0.3;    ///< idle-listening coefficient
    double kappa_loss = 0.25;   ///< per-hop loss coefficient, divided by network size
    double area = 10000.0;      ///< deployment area A_net, m^2
    double p_cap = 0.3;         ///< upper clamp applied to every probability

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct IndividualParams {
    double r_sense = 10.0;  ///< sensing radius, m
    double g_sense = 0.5;   ///< sensing delay, s
    double b_os = 0.0;
    double b_sec = 0.0;
    double b_store = 0.0;  ///< carried only; no flow equation uses it

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct LocalParams {
    double n = 1.0;         ///< neighbor count
    double net_dens = 1.0;  ///< nodes in the network
    double g_tx = 0.0;      ///< transmission delay, s
    double r_tx = 1.0;      ///< transmission radius, m
    double d_ij = 1.0;      ///< distance to the neighbor, m
    double idle_power = 0.0;
    double b_mon = 0.0;
    double b_sec = 0.0;
    double b_ohead = 0.0;
    double b_retx = 0.0;

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct GlobalParams {
    double dist_to_sink = 0.0;  ///< D, m
    double r_tx = 1.0;          ///< hop length used by the loss model
    double net_dens = 1.0;
    double b_sec = 0.0;
    double b_topo = 0.0;
    double b_rout = 0.0;
    double b_ohead = 0.0;

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct EnvironmentParams {
    double harvested_power = 0.0;  ///< H_i, watts; carried only
    double b_ph = 0.0;
    double b_sec = 0.0;

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct SinkParams {
    double b_ohead = 0.0;
    double b_sec = 0.0;

    std::vector<std::string> boundary_violations() const;
    void validate() const;
};

struct IndividualFlow {
    double total = 0.0;   ///< b_individual
    double sensed = 0.0;  ///< b_sens
};

struct LocalFlow {
    double total = 0.0;  ///< b_local
    double coll = 0.0;
    double idle = 0.0;
    double ohear = 0.0;
};

struct GlobalFlow {
    double total = 0.0;  ///< b_global
    double pktls = 0.0;
};

double p_sense(double r_sense, double g_sense, const ProbabilityModelConfig& cfg);
double p_coll(double n, double g_tx, double net_dens, const ProbabilityModelConfig& cfg);
double p_ohear(double n, double net_dens, double r_tx, const ProbabilityModelConfig& cfg);
double p_idle(double n, const ProbabilityModelConfig& cfg);

/// Per-hop loss probability, min(0.5, kappa_loss / net_dens). Not capped by p_cap.
double p_hop(double net_dens, const ProbabilityModelConfig& cfg);

/// 1 - (1 - p_hop)^hops, unclamped.
double loss_over_hops(double p_hop, int hops);

/// End-to-end loss towards a sink D metres away with ceil(D / r_tx) hops, clamped to p_cap.
double p_pktls(double dist_to_sink, double r_tx, double net_dens, const ProbabilityModelConfig& cfg);

/// base / (1 - p). Throws SingularityError when 1 - p < kDivisionGuard.
double self_referential_total(double base, double p);

IndividualFlow individual_flow_at(double p_sense, double b_os, double b_sec);
LocalFlow local_flow_at(double p_coll, double p_ohear, double p_idle, double b_sec, double b_mon,
                        double b_ohead);
GlobalFlow global_flow_at(double p_pktls, double b_sec, double b_topo, double b_rout, double b_ohead);

IndividualFlow individual_flow(const IndividualParams& params, const ProbabilityModelConfig& cfg);
LocalFlow local_flow(const LocalParams& params, const ProbabilityModelConfig& cfg);
GlobalFlow global_flow(const GlobalParams& params, const ProbabilityModelConfig& cfg);
double environment_flow(const EnvironmentParams& params);
double sink_flow(const SinkParams& params);

}  // namespace thrifty::flows
