// parser.hpp — expression grammar and pretty-printer
//
// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := base ('^' unsigned-integer)?
// base   := number | identifier | identifier '(' args ')' | '(' expr ')' | '-' base
//
// Identifiers are the registry's declared names (x1..xd, p1..pd, Q, P,
// q1..qN, pq1..pqN, parameters, V and derivative symbols such as dV_1).
// dot(x,p) expands to the component sum at parse time. print() emits this
// same grammar and round-trips: parse(print(e)) == e.

#pragma once

#include "ringdyn/expr.hpp"

#include <string>
#include <string_view>

namespace ringdyn {

Expr parse(std::string_view text, RegistryPtr registry);

std::string print(const Expr& e);

} // namespace ringdyn
