#pragma once

#include "lpsvp/lattice.hpp"
#include "lpsvp/setcover.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace lpsvp {

// {"d", "n", "basis": [[row-major rational strings]], "target", "r", "p"}, plus optional
// "row_scales": [{"radicand", "root"}] and "shape".
struct LatticeFile {
    Basis basis;
    std::optional<std::vector<Rational>> target;
    std::optional<Rational> r;
    std::optional<NormExponent> p;
    std::optional<std::string> shape;
};

LatticeFile read_lattice_json(const nlohmann::json& j);
nlohmann::json write_lattice_json(const Basis& b, const std::vector<Rational>* target = nullptr,
                                  const std::optional<Rational>& r = std::nullopt,
                                  const std::optional<NormExponent>& p = std::nullopt);

// {"universe_size", "sets", "d", "eta"}; eta defaults to 1.
SetCoverInstance read_setcover_json(const nlohmann::json& j);

// r^p, exact for integer p.
Number radius_power(const Rational& r, const NormExponent& p);

std::string read_file(const std::string& path);

}  // namespace lpsvp
