#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logsurf/bodies.hpp"
#include "logsurf/potential.hpp"

namespace logsurf {

/// `name:key=value,key=value` split into its parts. Values may themselves
/// contain commas when the key is the last one (box half-widths).
struct SpecString {
    std::string name;
    std::map<std::string, std::string> params;
};

SpecString split_spec(const std::string& text);

/// gaussian | gp:p=<p> | ball:R=<r> | shell:R=<r>,eps=<e> |
/// table:file=<path>[,extrapolation=linear|cutoff]
RadialPotential parse_measure(const std::string& text, bool allow_non_logconcave = false);

/// Two-column `t value` rows with `#` comments; the first row must be `0 0`.
TabulatedPotential read_table_file(const std::string& path, Extrapolation extrapolation);

/// sphere:R= | ball:R= | halfspace:rho= | slab:rho1=,rho2= | polytope:file= |
/// box:halfwidths=a,b,... Directions of half-spaces and slabs are e_1.
ConvexBody parse_body(const std::string& text, int d);

/// Rows of d unit-normal components followed by the offset.
Polytope read_polytope_file(const std::string& path, int d);

/// Half-space, slab and box bodies rewritten as polytopes; empty otherwise.
std::optional<Polytope> as_polytope(const ConvexBody& body);

/// `a:b:geometric` (doubling from a) or `a:b:linear` (unit steps).
std::vector<int> parse_dims(const std::string& text);

double parse_real(const std::string& text, const std::string& what);

}  // namespace logsurf
