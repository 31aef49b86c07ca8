#include "lpsvp/io.hpp"

#include "lpsvp/reductions.hpp"

#include <fstream>
#include <sstream>

namespace lpsvp {

namespace {

Rational rational_field(const nlohmann::json& v, const std::string& what) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) return parse_rational(v.dump());
    throw DomainError(what + " must be a rational string or number");
}

}  // namespace

LatticeFile read_lattice_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("basis")) throw DomainError("lattice file needs a \"basis\" field");
    const auto& jb = j.at("basis");
    if (!jb.is_array() || jb.empty()) throw DomainError("\"basis\" must be a nonempty array of rows");
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : jb) {
        if (!row.is_array()) throw DomainError("basis rows must be arrays");
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(rational_field(v, "basis entry"));
        rows.push_back(std::move(r));
    }
    std::vector<RowScale> scales;
    if (j.contains("row_scales"))
        for (const auto& s : j.at("row_scales"))
            scales.push_back({rational_field(s.at("radicand"), "radicand"), s.value("root", 1u)});
    LatticeFile f{Basis(std::move(rows), std::move(scales)), {}, {}, {}, {}};
    if (j.contains("d") && j.at("d").get<std::size_t>() != f.basis.d()) throw DomainError("\"d\" does not match the basis");
    if (j.contains("n") && j.at("n").get<std::size_t>() != f.basis.n()) throw DomainError("\"n\" does not match the basis");
    if (j.contains("target")) {
        std::vector<Rational> t;
        for (const auto& v : j.at("target")) t.push_back(rational_field(v, "target entry"));
        if (t.size() != f.basis.d()) throw DomainError("target length does not match the basis");
        f.target = std::move(t);
    }
    if (j.contains("r")) f.r = rational_field(j.at("r"), "r");
    if (j.contains("p")) {
        const auto& p = j.at("p");
        f.p = NormExponent(p.is_string() ? Real(p.get<std::string>()) : Real(p.dump()));
    }
    if (j.contains("shape")) f.shape = j.at("shape").get<std::string>();
    return f;
}

nlohmann::json write_lattice_json(const Basis& b, const std::vector<Rational>* target, const std::optional<Rational>& r,
                                  const std::optional<NormExponent>& p) {
    nlohmann::json j = to_json(b);
    if (target) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& v : *target) t.push_back(to_string(v));
        j["target"] = t;
    }
    if (r) j["r"] = to_string(*r);
    if (p) j["p"] = p->str();
    return j;
}

SetCoverInstance read_setcover_json(const nlohmann::json& j) {
    SetCoverInstance esc;
    esc.universe_size = j.at("universe_size").get<std::size_t>();
    esc.sets = j.at("sets").get<std::vector<std::vector<std::size_t>>>();
    esc.d = j.value("d", std::size_t{0});
    esc.eta = j.contains("eta") ? rational_field(j.at("eta"), "eta") : Rational(1);
    esc.validate();
    return esc;
}

Number radius_power(const Rational& r, const NormExponent& p) {
    if (r < 0) throw DomainError("radius must be nonnegative");
    return abs_pow(r, p);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace lpsvp
