#include "ringdyn/report.hpp"

#include "ringdyn/parser.hpp"

#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace ringdyn {

namespace {

using nlohmann::json;

std::string class_name(ConstraintClass cls) {
    switch (cls) {
        case ConstraintClass::FirstClass: return "first-class";
        case ConstraintClass::SecondClass: return "second-class";
        case ConstraintClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string analysis_report_json(const ConstraintAnalysis& analysis) {
    json root;
    json constraints = json::array();
    for (const auto& c : analysis.constraints)
        constraints.push_back({{"expression", print(c.expr)},
                               {"generation", c.generation},
                               {"class", class_name(c.cls)}});
    root["constraints"] = constraints;

    json matrix = json::array();
    for (const auto& row : analysis.constraint_matrix) {
        json cells = json::array();
        for (const auto& cell : row) cells.push_back(print(cell));
        matrix.push_back(cells);
    }
    root["constraint_matrix"] = matrix;

    json multipliers = json::array();
    for (const auto& lambda : analysis.multipliers) multipliers.push_back(print(lambda));
    root["multipliers"] = multipliers;

    json eom = json::object();
    const auto& reg = *analysis.registry;
    std::vector<VariableId> vars;
    for (int i = 1; i <= reg.dimension(); ++i) vars.push_back(reg.x(i));
    for (int i = 1; i <= reg.dimension(); ++i) vars.push_back(reg.p(i));
    vars.push_back(reg.Q());
    vars.push_back(reg.P());
    for (int j = 1; j <= reg.bath_modes(); ++j) vars.push_back(reg.q(j));
    for (int j = 1; j <= reg.bath_modes(); ++j) vars.push_back(reg.pq(j));
    for (const auto& [v, rhs] : equations_of_motion(analysis, vars))
        eom[reg.name(v)] = print(rhs);
    root["eom"] = eom;
    return root.dump(2) + "\n";
}

std::string table_json(const std::vector<CommutatorEntry>& table) {
    json entries = json::array();
    for (const auto& entry : table)
        entries.push_back({{"left", entry.left},
                           {"right", entry.right},
                           {"coefficient", print(entry.coefficient)},
                           {"ordering_ambiguous", entry.ordering_ambiguous}});
    return entries.dump(2) + "\n";
}

std::string table_text(const std::vector<CommutatorEntry>& table) {
    std::size_t pair_width = 0;
    for (const auto& entry : table)
        pair_width = std::max(pair_width, entry.left.size() + entry.right.size() + 4);
    std::ostringstream out;
    for (const auto& entry : table) {
        const std::string pair = "[" + entry.left + ", " + entry.right + "]";
        out << std::left << std::setw(static_cast<int>(pair_width + 2)) << pair
            << " = i*hbar * " << print(entry.coefficient);
        if (entry.ordering_ambiguous) out << "   (ordering-ambiguous)";
        out << '\n';
    }
    return out.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const StateLayout& layout = traj.layout;
    out << 't';
    for (int i = 1; i <= layout.dimension; ++i) out << ",x" << i;
    for (int i = 1; i <= layout.dimension; ++i) out << ",p" << i;
    out << ",Q,P";
    for (int j = 1; j <= layout.modes; ++j) out << ",q" << j;
    for (int j = 1; j <= layout.modes; ++j) out << ",pq" << j;
    out << '\n';
    for (Eigen::Index row = 0; row < traj.times.size(); ++row) {
        out << format_double(traj.times[row]);
        for (int col = 0; col < layout.size(); ++col)
            out << ',' << format_double(traj.states(row, col));
        out << '\n';
    }
}

void write_observables_csv(std::ostream& out, const ObservableSeries& obs) {
    out << "t,phi,chi,H_S,H_E,H_tot,absx,Q,xdotp\n";
    for (Eigen::Index row = 0; row < obs.t.size(); ++row) {
        out << format_double(obs.t[row]) << ',' << format_double(obs.phi[row]) << ','
            << format_double(obs.chi[row]) << ',' << format_double(obs.h_system[row]) << ','
            << format_double(obs.h_environment[row]) << ',' << format_double(obs.h_total[row])
            << ',' << format_double(obs.abs_x[row]) << ',' << format_double(obs.Q[row]) << ','
            << format_double(obs.x_dot_p[row]) << '\n';
    }
}

} // namespace ringdyn
