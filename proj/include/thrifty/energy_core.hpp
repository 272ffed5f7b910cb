#pragma once

// Resource-level and constituent-level linear energy model.
//
// Energy of a task is the inner product of per-resource packet counts with
// per-resource costs (joules per packet). Aggregating tasks by constituent
// gives one coefficient alpha_k per constituent, itself a weighted sum of the
// resource costs, and the overall energy is alpha . b over constituent flows.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "thrifty/constituent.hpp"
#include "thrifty/errors.hpp"

namespace thrifty {

template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, 5, 1>;

template <typename Scalar>
using Matrix5 = Eigen::Matrix<Scalar, 5, 5>;

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
    return v.array().isFinite().all();
}

template <typename Derived>
void require_nonnegative_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
    if (!all_finite(v)) throw ValidationError(std::string(what) + ": non-finite entry");
    if ((v.array() < 0).any()) throw ValidationError(std::string(what) + ": negative entry");
}

}  // namespace detail

/// Cost of one packet on each resource: cpu, mem, rx, tx, sens.
template <typename Scalar = double>
struct ResourcePowerProfile {
    Vector5<Scalar> values = Vector5<Scalar>::Zero();

    static ResourcePowerProfile make(Scalar cpu, Scalar mem, Scalar rx, Scalar tx, Scalar sens) {
        ResourcePowerProfile p;
        p.values << cpu, mem, rx, tx, sens;
        p.validate();
        return p;
    }

    Scalar operator[](Resource r) const { return values(static_cast<int>(r)); }

    void validate() const { detail::require_nonnegative_finite(values, "ResourcePowerProfile"); }
};

/// Packets handled by each resource. Counts are integral and nonnegative.
template <typename Scalar = double>
struct ResourceUsageVector {
    Vector5<Scalar> values = Vector5<Scalar>::Zero();

    static ResourceUsageVector make(Scalar cpu, Scalar mem, Scalar rx, Scalar tx, Scalar sens) {
        ResourceUsageVector u;
        u.values << cpu, mem, rx, tx, sens;
        u.validate();
        return u;
    }

    Scalar operator[](Resource r) const { return values(static_cast<int>(r)); }

    void validate() const {
        detail::require_nonnegative_finite(values, "ResourceUsageVector");
        for (int i = 0; i < 5; ++i) {
            using std::floor;
            if (floor(values(i)) != values(i))
                throw ValidationError("ResourceUsageVector: fractional packet count");
        }
    }

    ResourceUsageVector& operator+=(const ResourceUsageVector& other) {
        values += other.values;
        return *this;
    }

    friend ResourceUsageVector operator+(ResourceUsageVector a, const ResourceUsageVector& b) {
        a += b;
        return a;
    }
};

/// Packet flows per constituent for one accounting window.
template <typename Scalar = double>
struct ConstituentFlowVector {
    Vector5<Scalar> values = Vector5<Scalar>::Zero();

    static ConstituentFlowVector make(Scalar individual, Scalar local, Scalar global,
                                      Scalar environment, Scalar snk) {
        ConstituentFlowVector f;
        f.values << individual, local, global, environment, snk;
        f.validate();
        return f;
    }

    Scalar& operator[](Constituent c) { return values(static_cast<int>(c)); }
    Scalar operator[](Constituent c) const { return values(static_cast<int>(c)); }

    Scalar total() const { return values.sum(); }

    void validate() const { detail::require_nonnegative_finite(values, "ConstituentFlowVector"); }

    ConstituentFlowVector& operator+=(const ConstituentFlowVector& other) {
        values += other.values;
        return *this;
    }
};

/// Per-packet resource weights of every constituent; row k belongs to Constituent(k).
template <typename Scalar = double>
struct ConstituentResourceMix {
    Matrix5<Scalar> weights = Matrix5<Scalar>::Zero();

    auto row(Constituent c) const { return weights.row(static_cast<int>(c)); }

    void validate() const { detail::require_nonnegative_finite(weights, "ConstituentResourceMix"); }
};

/// Linear-model coefficients alpha_1..alpha_5 with the set of constituents in use.
template <typename Scalar = double>
struct CoefficientVector {
    Vector5<Scalar> alpha = Vector5<Scalar>::Zero();
    ConstituentMask active = ConstituentMask{}.set();

    Scalar operator[](Constituent c) const { return alpha(static_cast<int>(c)); }
    Scalar& operator[](Constituent c) { return alpha(static_cast<int>(c)); }

    bool is_active(Constituent c) const { return active.test(index(c)); }

    void validate() const {
        for (int k = 0; k < 5; ++k) {
            using std::isfinite;
            if (active.test(static_cast<std::size_t>(k)) && !isfinite(alpha(k)))
                throw ValidationError("CoefficientVector: non-finite active coefficient");
        }
    }

    /// Mask selector as a 0/1 vector, handy for masked dot products.
    Vector5<Scalar> selector() const {
        Vector5<Scalar> s;
        for (int k = 0; k < 5; ++k) s(k) = active.test(static_cast<std::size_t>(k)) ? Scalar(1) : Scalar(0);
        return s;
    }
};

/// Energy of one task: sum over resources of cost times packet count.
template <typename Scalar>
Scalar task_energy(const ResourceUsageVector<Scalar>& usage, const ResourcePowerProfile<Scalar>& profile) {
    usage.validate();
    profile.validate();
    return profile.values.dot(usage.values);
}

/// alpha_k for one constituent from its row of resource weights.
template <typename Derived, typename Scalar>
Scalar constituent_alpha(const Eigen::MatrixBase<Derived>& mix_row, const ResourcePowerProfile<Scalar>& profile) {
    if (mix_row.size() != 5) throw ValidationError("constituent_alpha: expected 5 weights");
    if (!detail::all_finite(mix_row)) throw ValidationError("constituent_alpha: non-finite weight");
    if ((mix_row.array() < 0).any()) throw ValidationError("constituent_alpha: negative weight");
    profile.validate();
    Scalar acc(0);
    for (int r = 0; r < 5; ++r) acc += Scalar(mix_row(r)) * profile.values(r);
    return acc;
}

/// All five coefficients constructed from a resource mix; every constituent active.
template <typename Scalar>
CoefficientVector<Scalar> coefficients_from_mix(const ConstituentResourceMix<Scalar>& mix,
                                                const ResourcePowerProfile<Scalar>& profile) {
    mix.validate();
    CoefficientVector<Scalar> a;
    for (auto c : kAllConstituents) a[c] = constituent_alpha(mix.row(c), profile);
    return a;
}

/// Overall energy: alpha . b over the active constituents. Inactive flows are masked out.
template <typename Scalar>
Scalar overall_energy(const CoefficientVector<Scalar>& alphas, const ConstituentFlowVector<Scalar>& flows) {
    alphas.validate();
    if (!detail::all_finite(flows.values)) throw ValidationError("overall_energy: non-finite flow");
    Scalar acc(0);
    for (int k = 0; k < 5; ++k)
        if (alphas.active.test(static_cast<std::size_t>(k))) acc += alphas.alpha(k) * flows.values(k);
    return acc;
}

}  // namespace thrifty
