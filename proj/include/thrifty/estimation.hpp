#pragma once

// Least-squares estimation of constituent coefficients from observed flows
// and energies, prediction, error metrics and sliding-window refits.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "thrifty/constituent.hpp"
#include "thrifty/energy_core.hpp"
#include "thrifty/errors.hpp"
#include "thrifty/trace.hpp"

namespace thrifty {

/// Singular-value ratio below which a design matrix counts as rank deficient.
inline constexpr double kRankRatioThreshold = 1e-10;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// M observations of N active constituent flows with the energy measured for each.
template <typename Scalar = double>
struct ObservationSet {
    MatrixX<Scalar> flows;             ///< M x N design matrix
    VectorX<Scalar> energy;            ///< M observed energies
    std::vector<Constituent> columns;  ///< constituent of each design column
    std::vector<long> slice;           ///< optional per-row annotation
    std::vector<Phase> phase;          ///< optional per-row annotation

    Eigen::Index rows() const { return flows.rows(); }
    Eigen::Index cols() const { return flows.cols(); }

    ConstituentMask mask() const {
        ConstituentMask m;
        for (auto c : columns) m.set(index(c));
        return m;
    }

    /// Rows [begin, begin + count) with their annotations.
    ObservationSet middle_rows(Eigen::Index begin, Eigen::Index count) const {
        ObservationSet out;
        out.flows = flows.middleRows(begin, count);
        out.energy = energy.segment(begin, count);
        out.columns = columns;
        if (!slice.empty()) out.slice.assign(slice.begin() + begin, slice.begin() + begin + count);
        if (!phase.empty()) out.phase.assign(phase.begin() + begin, phase.begin() + begin + count);
        return out;
    }

    /// Flows of row i spread back onto all five constituents.
    ConstituentFlowVector<Scalar> row_flows(Eigen::Index i) const {
        ConstituentFlowVector<Scalar> f;
        for (std::size_t j = 0; j < columns.size(); ++j)
            f[columns[j]] = flows(i, static_cast<Eigen::Index>(j));
        return f;
    }
};

/// Design matrix over the constituents in `mask`, in constituent order.
inline ObservationSet<double> observations_from_trace(const Trace& trace, ConstituentMask mask) {
    ObservationSet<double> obs;
    for (auto c : kAllConstituents)
        if (mask.test(index(c))) obs.columns.push_back(c);
    const auto m = static_cast<Eigen::Index>(trace.size());
    const auto n = static_cast<Eigen::Index>(obs.columns.size());
    obs.flows.resize(m, n);
    obs.energy.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& rec = trace[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) obs.flows(i, j) = rec.flows[obs.columns[static_cast<std::size_t>(j)]];
        obs.energy(i) = rec.energy_j;
        obs.slice.push_back(rec.slice);
        obs.phase.push_back(rec.phase);
    }
    return obs;
}

template <typename Scalar = double>
struct FitResult {
    CoefficientVector<Scalar> coefficients;
    VectorX<Scalar> residual;            ///< energy - flows * alpha
    VectorX<Scalar> standard_error;      ///< per design column
    Scalar condition = Scalar(0);        ///< largest / smallest singular value
    Eigen::Index observations = 0;
    std::vector<Constituent> negative;   ///< constituents fitted below zero (reported, not clamped)
};

/// Ordinary least squares: alpha minimizing |energy - flows * alpha|_2, no intercept.
template <typename Scalar>
FitResult<Scalar> fit_ls(const ObservationSet<Scalar>& obs) {
    const Eigen::Index m = obs.rows();
    const Eigen::Index n = obs.cols();
    if (n == 0) throw ValidationError("fit_ls: no active constituents");
    if (static_cast<std::size_t>(n) != obs.columns.size())
        throw ValidationError("fit_ls: column labels do not match design matrix");
    if (obs.energy.size() != m) throw ValidationError("fit_ls: energy vector length differs from row count");
    if (m <= n) {
        std::ostringstream os;
        os << "fit_ls: need more observations than constituents (M = " << m << ", N = " << n << ")";
        throw ValidationError(os.str());
    }
    if (!obs.flows.allFinite() || !obs.energy.allFinite()) throw ValidationError("fit_ls: non-finite observation");

    Eigen::JacobiSVD<MatrixX<Scalar>> svd(obs.flows, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const Scalar s_max = sv(0);
    const Scalar s_min = sv(n - 1);
    if (!(s_max > Scalar(0)) || s_min / s_max < Scalar(kRankRatioThreshold)) {
        std::vector<std::string> dependent;
        const auto& v = svd.matrixV();
        std::vector<bool> flagged(static_cast<std::size_t>(n), false);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (s_max > Scalar(0) && sv(i) / s_max >= Scalar(kRankRatioThreshold)) continue;
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(v(j, i)) > Scalar(1e-6)) flagged[static_cast<std::size_t>(j)] = true;
        }
        std::string list;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!flagged[static_cast<std::size_t>(j)]) continue;
            dependent.push_back(column_name(obs.columns[static_cast<std::size_t>(j)]));
            list += (list.empty() ? "" : ", ") + dependent.back();
        }
        throw RankDeficientError("rank-deficient flow matrix; dependent columns: " + list, dependent);
    }

    const VectorX<Scalar> alpha = obs.flows.colPivHouseholderQr().solve(obs.energy);

    FitResult<Scalar> fit;
    fit.coefficients.active.reset();
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto c = obs.columns[static_cast<std::size_t>(j)];
        fit.coefficients.active.set(index(c));
        fit.coefficients[c] = alpha(j);
        if (alpha(j) < Scalar(0)) fit.negative.push_back(c);
    }
    fit.residual = obs.energy - obs.flows * alpha;
    fit.condition = s_max / s_min;
    fit.observations = m;

    // Var(alpha_j) = sigma^2 [(b^T b)^-1]_jj with (b^T b)^-1 = V diag(1/s^2) V^T.
    const Scalar sigma2 = fit.residual.squaredNorm() / Scalar(m - n);
    const VectorX<Scalar> inv_s2 = sv.array().square().inverse().matrix();
    fit.standard_error = (svd.matrixV().array().square().matrix() * inv_s2 * sigma2).array().sqrt().matrix();
    return fit;
}

/// alpha . flows; every nonzero flow must belong to an active constituent.
template <typename Scalar>
Scalar predict(const CoefficientVector<Scalar>& model, const ConstituentFlowVector<Scalar>& flows) {
    for (auto c : kAllConstituents) {
        if (!model.is_active(c) && flows[c] != Scalar(0))
            throw ValidationError("predict: nonzero " + column_name(c) + " but the model does not include it");
    }
    return overall_energy(model, flows);
}

/// alpha . flows where the caller states which constituents its flows cover.
template <typename Scalar>
Scalar predict(const CoefficientVector<Scalar>& model, const ConstituentFlowVector<Scalar>& flows,
               ConstituentMask flow_mask) {
    if (flow_mask != model.active) throw ValidationError("predict: flow mask does not match model mask");
    return overall_energy(model, flows);
}

template <typename Scalar>
VectorX<Scalar> predict_all(const CoefficientVector<Scalar>& model, const ObservationSet<Scalar>& obs) {
    if (obs.mask() != model.active) throw ValidationError("predict: observation columns do not match model mask");
    VectorX<Scalar> out(obs.rows());
    for (Eigen::Index i = 0; i < obs.rows(); ++i) out(i) = overall_energy(model, obs.row_flows(i));
    return out;
}

struct ErrorMetrics {
    double mape_pct = 0.0;                 ///< mean absolute percentage error
    double max_ape_pct = 0.0;
    double mae = 0.0;                      ///< mean absolute error, joules
    std::vector<double> per_slice_pct;     ///< empty when percentages were not requested
    std::vector<double> per_slice_abs;
};

inline ErrorMetrics error_report(std::span<const double> predicted, std::span<const double> observed,
                                 bool percentage = true) {
    if (predicted.size() != observed.size()) throw ValidationError("error_report: length mismatch");
    if (predicted.empty()) throw ValidationError("error_report: no observations");
    ErrorMetrics m;
    const auto count = static_cast<double>(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double abs_err = std::abs(predicted[i] - observed[i]);
        m.per_slice_abs.push_back(abs_err);
        m.mae += abs_err / count;
        if (!percentage) continue;
        if (!(observed[i] > 0.0))
            throw ValidationError("error_report: percentage error needs positive observed energy (row " +
                                  std::to_string(i) + ")");
        const double ape = 100.0 * abs_err / observed[i];
        m.per_slice_pct.push_back(ape);
        m.mape_pct += ape / count;
        m.max_ape_pct = std::max(m.max_ape_pct, ape);
    }
    return m;
}

template <typename Scalar = double>
struct WindowFit {
    Eigen::Index start = 0;
    FitResult<Scalar> fit;
};

template <typename Scalar = double>
struct RollingFit {
    std::vector<WindowFit<Scalar>> windows;
    std::vector<Eigen::Index> skipped;  ///< window starts whose flows were rank deficient
};

/// One fit per window position [start, start + window), advancing by `step` rows.
template <typename Scalar>
RollingFit<Scalar> rolling_fit(const ObservationSet<Scalar>& obs, Eigen::Index window, Eigen::Index step = 1) {
    if (window <= obs.cols()) throw ValidationError("rolling_fit: window must exceed the constituent count");
    if (window > obs.rows()) throw ValidationError("rolling_fit: window larger than the trace");
    if (step < 1) throw ValidationError("rolling_fit: step must be positive");
    RollingFit<Scalar> out;
    for (Eigen::Index start = 0; start + window <= obs.rows(); start += step) {
        try {
            out.windows.push_back({start, fit_ls(obs.middle_rows(start, window))});
        } catch (const RankDeficientError&) {
            out.skipped.push_back(start);
        }
    }
    return out;
}

}  // namespace thrifty
