// bracket.hpp — canonical Poisson bracket over the registry's pairs

#pragma once

#include "ringdyn/expr.hpp"

namespace ringdyn {

// {f,g} = sum over canonical pairs (xi, pi) of df/dxi dg/dpi - df/dpi dg/dxi.
// Bilinear, antisymmetric, satisfies the Leibniz rule; opaque-function
// derivative symbols are carried through by the chain rule.
Expr poisson(const Expr& f, const Expr& g);

} // namespace ringdyn
