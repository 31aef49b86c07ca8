#include "lpsvp/counting.hpp"
#include "lpsvp/gadgets.hpp"
#include "lpsvp/io.hpp"
#include "lpsvp/oracles.hpp"
#include "lpsvp/reductions.hpp"
#include "lpsvp/theta.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace lpsvp;
using nlohmann::json;

namespace {

constexpr const char* kTool = "lpsvp";
constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct RunConfig {
    unsigned precision = 0;
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 1;
    std::string config_hash;
    json overrides = json::object();
};

RunConfig cfg;

std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << v;
    return ss.str();
}

json header() {
    return {{"tool", kTool},
            {"version", kVersion},
            {"precision_bits", working_precision()},
            {"config_hash", cfg.config_hash},
            {"seed", cfg.seed},
            {"overrides", cfg.overrides}};
}

void write_text(const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw DomainError("cannot write " + cfg.output);
    out << text;
}

void emit_json(const json& result) {
    json j = header();
    j["result"] = result;
    write_text(j.dump(2) + "\n");
}

void emit_csv(const std::vector<std::string>& cols, const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream ss;
    ss << "# tool=" << kTool << " version=" << kVersion << " precision_bits=" << working_precision()
       << " config_hash=" << cfg.config_hash << " seed=" << cfg.seed << "\n";
    for (std::size_t i = 0; i < cols.size(); ++i) ss << (i ? "," : "") << cols[i];
    ss << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) ss << (i ? "," : "") << r[i];
        ss << "\n";
    }
    write_text(ss.str());
}

void emit_table(const std::vector<std::string>& cols, const std::vector<std::vector<std::string>>& rows) {
    if (cfg.format == "csv") return emit_csv(cols, rows);
    json arr = json::array();
    for (const auto& r : rows) {
        json o;
        for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = r[i];
        arr.push_back(o);
    }
    emit_json(arr);
}

// 15 significant digits
std::string sig15(const Real& x) { return to_string(x, 15); }

std::vector<std::string> constants_row(const Real& p) {
    HardnessConstants h = w_p(NormExponent(p));
    return {to_string(p, 15), sig15(h.W_p.value), sig15(h.tau_star.value), h.C_p ? sig15(h.C_p->value) : "inf"};
}

NormExponent parse_p(const std::string& s) { return NormExponent(Real(s)); }

LatticeFile load_lattice(const std::string& path) { return read_lattice_json(json::parse(read_file(path))); }

NormExponent lattice_p(const LatticeFile& f, const std::string& p_opt) {
    if (!p_opt.empty()) return parse_p(p_opt);
    if (f.p) return *f.p;
    throw DomainError("no norm exponent: pass --p or set \"p\" in the file");
}

Rational lattice_r(const LatticeFile& f, const std::string& r_opt) {
    if (!r_opt.empty()) return parse_rational(r_opt);
    if (f.r) return *f.r;
    throw DomainError("no radius: pass --r or set \"r\" in the file");
}

json oracle_json(const OracleResult& r) {
    json j{{"decision", to_string(r.decision)}};
    if (!r.reason.empty()) j["reason"] = r.reason;
    if (r.witness) j["witness"] = *r.witness;
    return j;
}

json coverage_json(const std::optional<std::vector<std::size_t>>& v) { return v ? json(*v) : json(nullptr); }

int refused_exit = 0;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice problems in l_p norms: theta bounds, counting, reductions and oracles"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--precision", cfg.precision, "working precision in bits (default LPSVP_PRECISION or 128)");
    app.add_option("--out", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", cfg.output, "output path (default stdout)");
    app.add_option("--seed", cfg.seed, "random seed");

    // constants
    auto* constants = app.add_subcommand("constants", "W_p, tau*, C_p and p0");
    std::string c_p, c_sweep;
    bool c_p0 = false, c_claim = false;
    constants->add_option("--p", c_p, "norm exponent");
    constants->add_flag("--p0", c_p0, "locate p0 with W_p0 = 2");
    constants->add_option("--sweep", c_sweep, "lo:hi:step");
    constants->add_flag("--claim-bound", c_claim, "report C_p against 1/(1 - 2^-p (p + log2(3e)))");

    // count
    auto* count = app.add_subcommand("count", "lattice points of Z^n in a shifted l_p ball");
    std::string k_p, k_radius, k_shift = "0", k_shift_file, k_resolution;
    std::size_t k_n = 0;
    bool k_exact = false, k_theta = false;
    count->add_option("--p", k_p)->required();
    count->add_option("--n", k_n)->required();
    count->add_option("--radius", k_radius)->required();
    count->add_option("--shift", k_shift, "uniform shift");
    count->add_option("--shift-file", k_shift_file, "JSON array of n shifts");
    count->add_flag("--exact", k_exact, "exact count (integer p, rational shift)");
    count->add_option("--resolution", k_resolution, "cost grid for interval counts");
    count->add_flag("--theta", k_theta, "also report the theta upper bound");

    // lattice
    auto* lattice = app.add_subcommand("lattice", "operations on a lattice file");
    lattice->require_subcommand(1);
    std::string l_in, l_p, l_r, l_q;
    std::size_t l_trials = 10000, l_rank_cap = 14;
    auto lattice_opts = [&](CLI::App* sc) {
        sc->add_option("--in", l_in)->required();
        sc->add_option("--p", l_p);
        sc->add_option("--rank-cap", l_rank_cap);
    };
    auto* l_lambda1 = lattice->add_subcommand("lambda1", "shortest nonzero vector");
    lattice_opts(l_lambda1);
    auto* l_dist = lattice->add_subcommand("dist", "distance from the target");
    lattice_opts(l_dist);
    auto* l_prim = lattice->add_subcommand("count-primitive", "primitive vectors within r");
    lattice_opts(l_prim);
    l_prim->add_option("--r", l_r);
    auto* l_sparsify = lattice->add_subcommand("sparsify", "random sublattice {x : <z, x> = 0 mod q}");
    lattice_opts(l_sparsify);
    l_sparsify->add_option("--q", l_q)->required();
    auto* l_survival = lattice->add_subcommand("survival", "empirical Pr[lambda_1 <= r] after sparsification");
    lattice_opts(l_survival);
    l_survival->add_option("--q", l_q)->required();
    l_survival->add_option("--r", l_r);
    l_survival->add_option("--trials", l_trials);

    // gadget
    auto* gadget = app.add_subcommand("gadget", "integer gadget and random-shift tools");
    gadget->require_subcommand(1);
    std::string g_p = "3", g_delta, g_eps, g_d, g_eta;
    std::size_t g_m = 0, g_n = 100, g_trials = 100000, g_n_dagger = 0;
    bool g_search = false, g_certify = false, g_report = false;
    auto* g_params = gadget->add_subcommand("params", "gadget constants");
    g_params->add_option("--p", g_p);
    g_params->add_option("--delta", g_delta)->required();
    auto* g_scale = gadget->add_subcommand("scale", "scaled gadget for (m, d, eta)");
    g_scale->add_option("--p", g_p);
    g_scale->add_option("--m", g_m)->required();
    g_scale->add_option("--d", g_d)->required();
    g_scale->add_option("--eta", g_eta)->required();
    g_scale->add_option("--n-dagger", g_n_dagger);
    g_scale->add_flag("--certify", g_certify, "check the good-gadget inequality with exact counts");
    g_scale->add_flag("--search", g_search, "smallest n_dagger passing the check");
    g_scale->add_flag("--report-only", g_report, "record failed hypotheses instead of refusing");
    auto* g_mc = gadget->add_subcommand("mc-close", "Monte-Carlo for a random shift of norm sqrt(delta)");
    g_mc->add_option("--n", g_n);
    g_mc->add_option("--delta", g_delta)->required();
    g_mc->add_option("--eps", g_eps)->required();
    g_mc->add_option("--trials", g_trials);
    g_mc->add_flag("--report-only", g_report);
    auto* g_angle = gadget->add_subcommand("angle", "integral of sin^(n-2) over [theta1, theta2]");
    double g_t1 = 0, g_t2 = std::acos(-1.0);
    g_angle->add_option("--n", g_n);
    g_angle->add_option("--theta1", g_t1);
    g_angle->add_option("--theta2", g_t2);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "reduction pipeline");
    reduce->require_subcommand(1);
    std::string r_in, r_p = "3", r_q_min, r_delta, r_eps = "0.1";
    std::size_t r_ell = 0, r_n_dagger = 0, r_rank_cap = 0, r_width = 3;
    double r_oversample = 1.0, r_time_cap = 120;
    bool r_unsafe = false;
    auto* r_sat = reduce->add_subcommand("sat-to-svp", "DIMACS CNF to SVP instances, decided by the exact oracle");
    r_sat->add_option("--in", r_in)->required();
    r_sat->add_option("--p", r_p);
    r_sat->add_option("--width", r_width, "maximum clause width");
    r_sat->add_option("--ell", r_ell, "repetitions");
    r_sat->add_option("--q-min", r_q_min, "smallest prime candidate");
    r_sat->add_option("--delta", r_delta, "YES threshold fraction");
    r_sat->add_option("--n-dagger", r_n_dagger, "gadget rank");
    r_sat->add_option("--rank-cap", r_rank_cap, "oracle rank cap");
    r_sat->add_option("--time-cap", r_time_cap, "seconds per oracle call");
    r_sat->add_flag("--unsafe-overrides", r_unsafe, "allow parameters outside the guarantee");
    auto* r_setcover = reduce->add_subcommand("sat-to-setcover", "DIMACS CNF to exact set cover");
    r_setcover->add_option("--in", r_in)->required();
    r_setcover->add_option("--width", r_width);
    auto* r_pad = reduce->add_subcommand("pad-cvp", "append the integer gadget to a padded CVP instance");
    r_pad->add_option("--in", r_in)->required();
    r_pad->add_option("--n-dagger", r_n_dagger)->required();
    r_pad->add_option("--p", r_p);
    auto* r_embed = reduce->add_subcommand("embed", "random l2 -> lp embedding");
    r_embed->add_option("--in", r_in)->required();
    r_embed->add_option("--p", r_p)->required();
    r_embed->add_option("--eps", r_eps);
    r_embed->add_option("--oversample", r_oversample);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact decision oracles");
    oracle->require_subcommand(1);
    std::string o_in, o_r, o_p;
    std::size_t o_rank_cap = 14, o_size_cap = 64;
    double o_time_cap = 120;
    auto oracle_opts = [&](CLI::App* sc) {
        sc->add_option("--in", o_in)->required();
        sc->add_option("--r", o_r);
        sc->add_option("--p", o_p);
        sc->add_option("--rank-cap", o_rank_cap);
        sc->add_option("--time-cap", o_time_cap);
    };
    auto* o_svp = oracle->add_subcommand("svp", "lambda_1 <= r ?");
    oracle_opts(o_svp);
    auto* o_cvp = oracle->add_subcommand("cvp", "dist(t, L) <= r ?");
    oracle_opts(o_cvp);
    auto* o_cover = oracle->add_subcommand("cover", "minimal exact cover and minimal cover");
    o_cover->add_option("--in", o_in)->required();
    o_cover->add_option("--size-cap", o_size_cap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 64;
    }

    std::string joined;
    // the output location is not part of the configuration
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--output") {
            ++i;
            continue;
        }
        if (a.rfind("--output=", 0) == 0) continue;
        joined += a + '\x1f';
    }
    cfg.config_hash = hex64(fnv1a(joined));

    try {
        if (cfg.precision) set_working_precision(cfg.precision);
        working_precision();

        if (*constants) {
            std::vector<std::string> cols{"p", "W_p", "tau_star", "C_p"};
            if (c_p0) {
                RealApprox p0 = find_p0();
                if (cfg.format == "csv")
                    emit_csv({"p0", "err"}, {{to_string(p0.value, 15), to_string(p0.err, 3)}});
                else
                    emit_json({{"p0", to_string(p0.value, 20)}, {"err", to_string(p0.err, 3)}});
            } else if (!c_sweep.empty()) {
                auto a = c_sweep.find(':'), b = c_sweep.rfind(':');
                if (a == std::string::npos || a == b) throw DomainError("--sweep expects lo:hi:step");
                Rational lo = parse_rational(c_sweep.substr(0, a)), hi = parse_rational(c_sweep.substr(a + 1, b - a - 1)),
                         step = parse_rational(c_sweep.substr(b + 1));
                if (step <= 0 || hi < lo) throw DomainError("--sweep needs lo <= hi and step > 0");
                std::vector<std::vector<std::string>> rows;
                for (Rational p = lo; p <= hi; p += step) rows.push_back(constants_row(to_real(p)));
                emit_table(cols, rows);
            } else if (!c_p.empty()) {
                auto row = constants_row(Real(c_p));
                if (c_claim) {
                    cols.push_back("claim_bound");
                    row.push_back(sig15(cp_simple_bound(Real(c_p))));
                }
                emit_table(cols, {row});
            } else {
                throw DomainError("constants needs --p, --p0 or --sweep");
            }
        } else if (*count) {
            NormExponent p = parse_p(k_p);
            Number rp = radius_power(parse_rational(k_radius), p);
            ShiftedBallQuery q;
            if (!k_shift_file.empty()) {
                std::vector<Number> t;
                for (const auto& v : json::parse(read_file(k_shift_file)))
                    t.push_back(Number(parse_rational(v.is_string() ? v.get<std::string>() : v.dump())));
                if (t.size() != k_n) throw DomainError("shift file length differs from --n");
                q = ShiftedBallQuery::vector(p, rp, t);
            } else {
                q = ShiftedBallQuery::uniform(p, k_n, rp, Number(parse_rational(k_shift)));
            }
            json res;
            CountBounds cb;
            if (k_exact || k_resolution.empty()) {
                cb = count_exact(q);
                res["method"] = "exact";
            } else {
                cb = count_interval(q, parse_rational(k_resolution));
                res["method"] = "interval";
            }
            res["lo"] = cb.lo.str();
            res["hi"] = cb.hi.str();
            if (k_theta && k_shift_file.empty()) {
                auto ub = count_upper_bound_theta(p, rp, ShiftProfile::uniform(to_real(parse_rational(k_shift)), k_n));
                res["theta_upper"] = to_string(ub.bound.hi(), 20);
                res["theta_tau"] = to_string(ub.tau, 20);
            }
            if (cfg.format == "csv")
                emit_csv({"lo", "hi"}, {{cb.lo.str(), cb.hi.str()}});
            else
                emit_json(res);
        } else if (*lattice) {
            LatticeFile f = load_lattice(l_in);
            EnumOptions opts;
            opts.rank_cap = l_rank_cap;
            if (*l_lambda1) {
                NormExponent p = lattice_p(f, l_p);
                Minimum mn = lambda1(f.basis, p, opts);
                emit_json({{"lambda1_pow", mn.value_pow.str()}, {"lambda1", to_string(mn.value.value, 20)},
                           {"coeffs", mn.coeffs}});
            } else if (*l_dist) {
                NormExponent p = lattice_p(f, l_p);
                if (!f.target) throw DomainError("dist needs a target in the file");
                Minimum mn = dist(f.basis, *f.target, p, opts);
                emit_json({{"dist_pow", mn.value_pow.str()}, {"dist", to_string(mn.value.value, 20)},
                           {"coeffs", mn.coeffs}});
            } else if (*l_prim) {
                NormExponent p = lattice_p(f, l_p);
                Rational r = lattice_r(f, l_r);
                Integer c = count_primitive(f.basis, p, radius_power(r, p), opts);
                emit_json({{"r", to_string(r)}, {"primitive_count", c.str()}});
            } else if (*l_sparsify) {
                Integer q(l_q);
                SparsifyResult s = sparsify(f.basis, q, cfg.seed);
                json z = json::array();
                for (const auto& v : s.z) z.push_back(v.str());
                json out = write_lattice_json(s.basis, f.target ? &*f.target : nullptr, f.r, f.p);
                out["z"] = z;
                out["q"] = q.str();
                emit_json(out);
            } else if (*l_survival) {
                NormExponent p = lattice_p(f, l_p);
                Rational r = lattice_r(f, l_r);
                SurvivalStats st =
                    sparsify_survival_stats(f.basis, p, radius_power(r, p), Integer(l_q), l_trials, cfg.seed, opts);
                emit_json({{"trials", st.trials}, {"hits", st.hits}, {"frequency", st.frequency}, {"sigma", st.sigma},
                           {"N", st.primitive_count.str()}, {"bound_lo", st.bound_lo}, {"bound_hi", st.bound_hi},
                           {"preconditions_hold", st.preconditions_hold}, {"always", st.always}});
            }
        } else if (*gadget) {
            if (*g_params) {
                GadgetParams gp = integer_gadget_params(parse_p(g_p), Real(g_delta));
                emit_json(to_json(gp));
            } else if (*g_scale) {
                Rational eta = parse_rational(g_eta);
                GadgetParams gp = integer_gadget_params(parse_p(g_p), sqrt(to_real(eta)));
                Rational d = parse_rational(g_d);
                json out{{"params", to_json(gp)}};
                if (g_search) {
                    NDaggerSearch s = search_n_dagger(gp, g_m, d, eta);
                    out["search"] = {{"n_dagger", s.n_dagger}, {"evaluations", s.evaluations}};
                    g_n_dagger = s.n_dagger;
                    g_certify = true;
                }
                ScaledGadget sg = scale_gadget(gp, g_m, d, eta, g_report ? GadgetMode::ReportOnly : GadgetMode::Strict,
                                               g_n_dagger ? std::optional<std::size_t>(g_n_dagger) : std::nullopt);
                out["gadget"] = to_json(sg);
                if (g_certify) {
                    GoodGadgetCheck c = certify_good_gadget(gp, sg);
                    out["check"] = {{"lhs_hi", to_string(c.lhs_hi, 20)},
                                    {"rhs_lo", to_string(c.rhs_lo, 20)},
                                    {"N_zm", c.N_zm.str()},
                                    {"holds", c.holds}};
                }
                emit_json(out);
            } else if (*g_mc) {
                std::vector<double> v(g_n, 0.0);
                if (g_n) v[0] = 1.0;
                CloseProbResult r = close_prob_mc(v, std::stod(g_delta), std::stod(g_eps), g_trials, cfg.seed,
                                                  g_report ? GadgetMode::ReportOnly : GadgetMode::Strict);
                json out{{"n", g_n},           {"trials", r.trials}, {"hits", r.hits},
                         {"frequency", r.frequency}, {"sigma", r.sigma}, {"analytic_bound", r.analytic_bound},
                         {"report_only", r.report_only}};
                if (cfg.format == "csv")
                    emit_csv({"n", "trials", "frequency", "sigma", "analytic_bound"},
                             {{std::to_string(g_n), std::to_string(r.trials), std::to_string(r.frequency),
                               std::to_string(r.sigma), std::to_string(r.analytic_bound)}});
                else
                    emit_json(out);
            } else if (*g_angle) {
                emit_json({{"n", g_n}, {"integral", angle_integral(g_n, g_t1, g_t2)}});
            }
        } else if (*reduce) {
            if (*r_sat || *r_setcover) {
                CnfFormula f = parse_dimacs(read_file(r_in), r_width);
                if (*r_setcover) {
                    SatSetCover sc = sat_to_setcover(f);
                    json labels = json::array();
                    for (const auto& l : sc.labels)
                        labels.push_back({{"var", l.var}, {"positive", l.positive}, {"clauses", l.clauses}});
                    json out = to_json(sc.esc);
                    out["labels"] = labels;
                    out["occurrence_cap"] = f.occurrence_cap;
                    emit_json(out);
                } else {
                    PipelineParams pp;
                    auto& ov = pp.overrides;
                    if (r_ell) ov.ell = r_ell;
                    if (!r_q_min.empty()) ov.q_min = Integer(r_q_min);
                    if (!r_delta.empty()) ov.delta = parse_rational(r_delta);
                    if (r_n_dagger) ov.n_dagger = r_n_dagger;
                    if (r_rank_cap) ov.rank_cap = r_rank_cap;
                    if (ov.any() && !r_unsafe)
                        throw PreconditionError("overrides leave the reduction's guarantee; pass --unsafe-overrides");
                    if (r_ell) cfg.overrides["ell"] = r_ell;
                    if (!r_q_min.empty()) cfg.overrides["q_min"] = r_q_min;
                    if (!r_delta.empty()) cfg.overrides["delta"] = r_delta;
                    if (r_n_dagger) cfg.overrides["n_dagger"] = r_n_dagger;
                    if (r_rank_cap) cfg.overrides["rank_cap"] = r_rank_cap;
                    pp.budget.time_cap_seconds = r_time_cap;
                    PipelineResult res;
                    try {
                        res = pipeline_sat_to_svp(f, parse_p(r_p), pp, cfg.seed);
                    } catch (const StageError& e) {
                        if (!e.precondition) throw;
                        emit_json({{"decision", "REFUSED"}, {"stage", e.stage}, {"reason", e.what()}});
                        std::cout << "DECISION=REFUSED seed=" << cfg.seed << "\n";
                        return 2;
                    }
                    json out = to_json(res.transcript);
                    out["gadget_params"] = to_json(res.gadget_params);
                    out["gadget"] = to_json(res.gadget);
                    emit_json(out);
                    std::cout << "DECISION=" << to_string(*res.transcript.decision) << " seed=" << cfg.seed << "\n";
                    if (*res.transcript.decision == Decision::Refused) refused_exit = 2;
                }
            } else if (*r_pad) {
                LatticeFile f = load_lattice(r_in);
                if (f.shape && *f.shape != "bgs17") throw DomainError("pad-cvp needs \"shape\": \"bgs17\"");
                if (!f.target || !f.r) throw DomainError("pad-cvp needs a target and r");
                NormExponent p = f.p ? *f.p : parse_p(r_p);
                CvpInstance inst{f.basis, *f.target, radius_power(*f.r, p), p};
                emit_json(to_json(pad_cvp_with_integer_gadget(inst, r_n_dagger)));
            } else if (*r_embed) {
                LatticeFile f = load_lattice(r_in);
                EmbedResult e = embed_l2_to_lp(f.basis, parse_p(r_p), std::stod(r_eps), cfg.seed, r_oversample);
                json out = write_lattice_json(e.basis);
                out["m"] = e.m;
                out["normalizer"] = to_string(e.normalizer, 20);
                out["distortion_min"] = e.distortion_min;
                out["distortion_max"] = e.distortion_max;
                out["samples"] = e.samples;
                emit_json(out);
            }
        } else if (*oracle) {
            if (*o_cover) {
                SetCoverInstance esc = read_setcover_json(json::parse(read_file(o_in)));
                CoverSearchResult r = exact_cover_search(esc, o_size_cap);
                json out{{"refused", r.refused}, {"exact", coverage_json(r.exact)}, {"cover", coverage_json(r.cover)}};
                if (r.refused) {
                    out["reason"] = r.reason;
                    refused_exit = 2;
                }
                emit_json(out);
            } else {
                LatticeFile f = load_lattice(o_in);
                NormExponent p = lattice_p(f, o_p);
                Number rp = radius_power(lattice_r(f, o_r), p);
                OracleBudget budget;
                budget.rank_cap = o_rank_cap;
                budget.time_cap_seconds = o_time_cap;
                OracleResult r;
                if (*o_svp) {
                    r = svp_decide(f.basis, p, rp, budget);
                } else {
                    if (!f.target) throw DomainError("cvp needs a target in the file");
                    r = cvp_decide(f.basis, *f.target, p, rp, budget);
                }
                emit_json(oracle_json(r));
                if (r.decision == Decision::Refused) refused_exit = 2;
            }
        }
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.precondition ? 2 : 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return refused_exit;
}
