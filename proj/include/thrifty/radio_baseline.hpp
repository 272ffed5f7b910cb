#pragma once

// First-order radio model: per-bit electronics cost plus a distance-dependent
// amplifier term (d^2 below the crossover distance, d^4 above it), and the
// distance beyond which relaying through a midpoint node costs less than a
// direct transmission.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "thrifty/errors.hpp"

namespace thrifty::radio {

template <typename Scalar = double>
struct RadioModelParams {
    Scalar e_t_elec = Scalar(50e-9);   ///< J/bit
    Scalar e_r_elec = Scalar(50e-9);   ///< J/bit
    Scalar eps_fs = Scalar(10e-12);    ///< J/bit/m^2
    Scalar eps_mp = Scalar(0.0013e-12);///< J/bit/m^4
    Scalar eps_amp = Scalar(100e-12);  ///< J/bit/m^alpha_pl
    Scalar alpha_pl = Scalar(2);
    std::optional<Scalar> d0_override;

    /// Crossover distance; sqrt(eps_fs / eps_mp) unless overridden, which makes tx continuous.
    Scalar d0() const {
        using std::sqrt;
        return d0_override ? *d0_override : sqrt(eps_fs / eps_mp);
    }

    std::vector<std::string> boundary_violations() const {
        std::vector<std::string> v;
        auto positive = [&](Scalar x, const char* what) {
            using std::isfinite;
            if (!(isfinite(x) && x > Scalar(0))) v.push_back(std::string("radio: ") + what + " > 0 required");
        };
        positive(e_t_elec, "e_t_elec");
        positive(e_r_elec, "e_r_elec");
        positive(eps_fs, "eps_fs");
        positive(eps_mp, "eps_mp");
        positive(eps_amp, "eps_amp");
        if (!(alpha_pl > Scalar(1))) v.push_back("radio: alpha_pl > 1 required");
        if (d0_override) positive(*d0_override, "d0");
        return v;
    }

    void validate() const {
        auto v = boundary_violations();
        if (!v.empty()) throw ValidationError(v.front());
    }
};

template <typename Scalar>
Scalar tx_energy_per_bit(Scalar d, const RadioModelParams<Scalar>& p) {
    using std::isfinite;
    if (!(isfinite(d) && d >= Scalar(0))) throw ValidationError("tx_energy_per_bit: negative distance");
    p.validate();
    const Scalar d2 = d * d;
    if (d < p.d0()) return p.e_t_elec + p.eps_fs * d2;
    return p.e_t_elec + p.eps_mp * d2 * d2;
}

template <typename Scalar>
Scalar rx_energy_per_bit(const RadioModelParams<Scalar>& p) {
    p.validate();
    return p.e_r_elec;
}

/// Single-exponent amplifier cost of one hop over d: e_t_elec + eps_amp * d^alpha_pl.
template <typename Scalar>
Scalar amp_tx_energy_per_bit(Scalar d, const RadioModelParams<Scalar>& p) {
    using std::pow;
    return p.e_t_elec + p.eps_amp * pow(d, p.alpha_pl);
}

/// Distance above which a midpoint relay saves energy under the single-exponent amplifier model.
template <typename Scalar>
Scalar relay_threshold(const RadioModelParams<Scalar>& p) {
    if (!(p.alpha_pl > Scalar(1)))
        throw ValidationError("relay_threshold: alpha_pl must exceed 1");
    p.validate();
    using std::pow;
    const Scalar shrink = Scalar(1) - pow(Scalar(2), Scalar(1) - p.alpha_pl);
    return pow((p.e_t_elec + p.e_r_elec) / (shrink * p.eps_amp), Scalar(1) / p.alpha_pl);
}

/// Cost per bit of sending over d directly, and through a midpoint relay.
template <typename Scalar>
struct RelayComparison {
    Scalar one_hop;
    Scalar two_hop;
};

template <typename Scalar>
RelayComparison<Scalar> compare_relay(Scalar d, const RadioModelParams<Scalar>& p) {
    p.validate();
    return {amp_tx_energy_per_bit(d, p) + p.e_r_elec,
            Scalar(2) * amp_tx_energy_per_bit(d / Scalar(2), p) + Scalar(2) * p.e_r_elec};
}

}  // namespace thrifty::radio
