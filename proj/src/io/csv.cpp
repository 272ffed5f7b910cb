#include "thrifty/io/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "thrifty/errors.hpp"

namespace thrifty::io {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

long parse_long(const std::string& text) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("not an integer: \"" + text + "\"");
    return v;
}

bool parse_flag(const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no" || text.empty()) return false;
    throw ValidationError("not a boolean: \"" + text + "\"");
}

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

double parse_number(const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("not a number: \"" + text + "\"");
    return v;
}

void write_trace(std::ostream& out, const Trace& trace) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << r.slice << ',' << name(r.phase);
        for (auto c : kAllConstituents) out << ',' << format_number(r.flows[c]);
        out << ',' << format_number(r.energy_j) << ',' << r.alive_nodes << '\n';
    }
}

Trace read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kTraceHeader)
        throw ValidationError(std::string("trace header must be exactly: ") + kTraceHeader);
    Trace trace;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 9) throw ValidationError("trace row " + std::to_string(row) + ": expected 9 columns");
        try {
            SliceRecord r;
            r.slice = parse_long(cells[0]);
            auto phase = parse_phase(cells[1]);
            if (!phase) throw ValidationError("unknown phase \"" + cells[1] + "\"");
            r.phase = *phase;
            for (int k = 0; k < kConstituentCount; ++k) r.flows.values(k) = parse_number(cells[2 + k]);
            r.flows.validate();
            r.energy_j = parse_number(cells[7]);
            r.alive_nodes = parse_long(cells[8]);
            if (!trace.empty() && r.slice <= trace.back().slice)
                throw ValidationError("slice index must increase");
            trace.push_back(r);
        } catch (const ValidationError& e) {
            throw ValidationError("trace row " + std::to_string(row) + ": " + e.what());
        }
    }
    return trace;
}

void write_report(std::ostream& out, const FitReport& report) {
    out << "constituent,alpha,stderr,energy_share\n";
    for (std::size_t j = 0; j < report.columns.size(); ++j) {
        const auto c = report.columns[j];
        out << name(c) << ',' << format_number(report.fit.coefficients[c]) << ','
            << format_number(report.fit.standard_error(static_cast<Eigen::Index>(j))) << ','
            << format_number(report.energy_share(static_cast<int>(index(c)))) << '\n';
    }
    out << "\nslice,observed_j,predicted_j,pct_error\n";
    for (const auto& p : report.predictions)
        out << p.slice << ',' << format_number(p.observed_j) << ',' << format_number(p.predicted_j) << ','
            << format_number(p.pct_error) << '\n';
    out << "\nmape_pct,max_ape_pct,dominant_constituent,observations,condition\n";
    out << format_number(report.metrics.mape_pct) << ',' << format_number(report.metrics.max_ape_pct) << ','
        << name(report.dominant) << ',' << report.fit.observations << ',' << format_number(report.fit.condition)
        << '\n';
    if (!report.windows.empty() || !report.skipped_windows.empty()) {
        out << "\nwindow_start";
        for (auto c : report.columns) out << ",alpha_" << name(c);
        out << '\n';
        for (const auto& w : report.windows) {
            out << w.start;
            for (auto c : report.columns) out << ',' << format_number(w.coefficients[c]);
            out << '\n';
        }
        for (auto s : report.skipped_windows) {
            out << s;
            for (std::size_t j = 0; j < report.columns.size(); ++j) out << ",rank_deficient";
            out << '\n';
        }
    }
}

CoefficientVector<double> read_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line).rfind("constituent,alpha", 0) != 0)
        throw ValidationError("model file must start with a \"constituent,alpha,...\" header");
    CoefficientVector<double> model;
    model.active.reset();
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) break;
        const auto cells = split(line);
        if (cells.size() < 2) throw ValidationError("model row needs constituent and alpha: \"" + line + "\"");
        auto c = parse_constituent(cells[0]);
        if (!c) throw ValidationError("unknown constituent \"" + cells[0] + "\"");
        model[*c] = parse_number(cells[1]);
        model.active.set(index(*c));
    }
    if (model.active.none()) throw ValidationError("model file lists no coefficients");
    model.validate();
    return model;
}

std::vector<policy::TaskDescriptor> read_tasks(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "id,constituent,pf_size,importance,mandatory")
        throw ValidationError("task file header must be exactly: id,constituent,pf_size,importance,mandatory");
    std::vector<policy::TaskDescriptor> tasks;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split(line);
        try {
            if (cells.size() != 5) throw ValidationError("expected 5 columns");
            policy::TaskDescriptor t;
            t.id = static_cast<int>(parse_long(cells[0]));
            auto c = parse_constituent(cells[1]);
            if (!c) throw ValidationError("unknown constituent \"" + cells[1] + "\"");
            t.constituent = *c;
            t.pf_size = parse_long(cells[2]);
            t.importance = parse_number(cells[3]);
            t.mandatory = parse_flag(cells[4]);
            t.validate();
            tasks.push_back(t);
        } catch (const ValidationError& e) {
            throw ValidationError("task row " + std::to_string(row) + ": " + e.what());
        }
    }
    return tasks;
}

void write_tasks(std::ostream& out, const std::vector<policy::TaskDescriptor>& tasks) {
    out << "id,constituent,pf_size,importance,mandatory\n";
    for (const auto& t : tasks)
        out << t.id << ',' << name(t.constituent) << ',' << t.pf_size << ',' << format_number(t.importance) << ','
            << (t.mandatory ? 1 : 0) << '\n';
}

void write_schedule(std::ostream& out, const policy::Schedule& s) {
    out << "order,id,constituent,pf_size,importance,cost_j,mandatory\n";
    int order = 0;
    for (const auto& st : s.order)
        out << order++ << ',' << st.task.id << ',' << name(st.task.constituent) << ',' << st.task.pf_size << ','
            << format_number(st.task.importance) << ',' << format_number(st.cost) << ','
            << (st.task.mandatory ? 1 : 0) << '\n';
    out << "\nfeasible,method,total_energy_j,battery_j,slack_j,total_importance,e_individual,e_local,e_global,"
           "e_environment,e_snk,c1_local_positive,c2_global_positive,c3_within_budget,infeasible_reason\n";
    out << (s.feasible ? 1 : 0) << ',' << (s.method == policy::Method::Exact ? "exact" : "heuristic") << ','
        << format_number(s.total_energy) << ',' << format_number(s.battery) << ',' << format_number(s.slack) << ','
        << format_number(s.total_importance);
    for (int k = 0; k < kConstituentCount; ++k) out << ',' << format_number(s.energy_by_constituent(k));
    out << ',' << (s.constraints.local_positive ? 1 : 0) << ',' << (s.constraints.global_positive ? 1 : 0) << ','
        << (s.constraints.within_budget ? 1 : 0) << ',';
    if (s.infeasible_reason) {
        std::string reason = *s.infeasible_reason;
        for (auto& ch : reason)
            if (ch == ',') ch = ';';
        out << reason;
    }
    out << '\n';
}

void write_sweep(std::ostream& out, const std::vector<std::string>& parameter_keys,
                 const std::vector<SweepRow>& rows) {
    out << "run,seed";
    for (const auto& k : parameter_keys) out << ',' << k;
    out << ",b_individual,b_local,b_global,b_environment,b_snk,energy_j,alive_nodes\n";
    for (const auto& r : rows) {
        out << r.run << ',' << r.seed;
        for (double p : r.parameters) out << ',' << format_number(p);
        for (auto c : kAllConstituents) out << ',' << format_number(r.flows[c]);
        out << ',' << format_number(r.energy_j) << ',' << r.alive_nodes << '\n';
    }
}

}  // namespace thrifty::io
