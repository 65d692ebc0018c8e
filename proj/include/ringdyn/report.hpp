// report.hpp — serialization of analysis reports, commutator tables, and runs

#pragma once

#include "ringdyn/dynamics.hpp"
#include "ringdyn/quantize.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ringdyn {

// JSON with fields constraints[] {expression, generation, class},
// constraint_matrix[][], multipliers[], eom{}; expression strings round-trip
// through the expression grammar.
std::string analysis_report_json(const ConstraintAnalysis& analysis);

// JSON list of {left, right, coefficient, ordering_ambiguous}.
std::string table_json(const std::vector<CommutatorEntry>& table);

// Human-readable aligned rendering of the same table.
std::string table_text(const std::vector<CommutatorEntry>& table);

// CSV `t,x1..xd,p1..pd,Q,P,q1..qN,pq1..pqN`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// CSV `t,phi,chi,H_S,H_E,H_tot,absx,Q,xdotp`, 17 significant digits.
void write_observables_csv(std::ostream& out, const ObservableSeries& obs);

std::string format_double(double value); // 17 significant digits

} // namespace ringdyn
