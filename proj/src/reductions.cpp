#include "lpsvp/reductions.hpp"

#include "lpsvp/counting.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace lpsvp {

ParseError::ParseError(std::size_t line_no, const std::string& what)
    : DomainError("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

void CnfFormula::validate() const {
    if (num_vars == 0) throw DomainError("formula has no variables");
    std::vector<bool> seen(num_vars + 1, false);
    for (const auto& c : clauses) {
        if (c.empty()) throw DomainError("formula has an empty clause");
        for (int lit : c) {
            std::size_t v = static_cast<std::size_t>(std::abs(lit));
            if (lit == 0 || v > num_vars) throw DomainError("literal out of range: " + std::to_string(lit));
            seen[v] = true;
        }
    }
    for (std::size_t v = 1; v <= num_vars; ++v)
        if (!seen[v]) throw DomainError("variable " + std::to_string(v) + " appears in no clause");
}

CnfFormula parse_dimacs(const std::string& text, std::optional<std::size_t> max_width) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0, declared_clauses = 0;
    bool header = false;
    std::vector<int> cur;
    std::size_t cur_line = 0;
    auto finish_clause = [&](std::size_t at) {
        if (cur.empty()) throw ParseError(at, "empty clause");
        std::vector<int> dedup;
        for (int lit : cur)
            if (std::find(dedup.begin(), dedup.end(), lit) == dedup.end())
                dedup.push_back(lit);
            else
                ++f.duplicates_removed;
        if (max_width && dedup.size() > *max_width)
            throw ParseError(at, "clause has " + std::to_string(dedup.size()) + " literals, more than the width " +
                                     std::to_string(*max_width));
        f.width = std::max(f.width, dedup.size());
        f.clauses.push_back(std::move(dedup));
        cur.clear();
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "%") break;
        if (tok == "p") {
            if (header) throw ParseError(line_no, "second problem line");
            std::string fmt;
            long long v = -1, c = -1;
            if (!(ls >> fmt >> v >> c) || fmt != "cnf" || v <= 0 || c < 0)
                throw ParseError(line_no, "malformed problem line, expected 'p cnf <vars> <clauses>'");
            std::string extra;
            if (ls >> extra) throw ParseError(line_no, "trailing text after problem line");
            f.num_vars = static_cast<std::size_t>(v);
            declared_clauses = static_cast<std::size_t>(c);
            header = true;
            continue;
        }
        if (!header) throw ParseError(line_no, "clause before the problem line");
        do {
            long long lit = 0;
            std::size_t pos = 0;
            try {
                lit = std::stoll(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size() || tok.empty()) throw ParseError(line_no, "bad literal '" + tok + "'");
            if (lit == 0) {
                finish_clause(line_no);
                continue;
            }
            if (static_cast<std::size_t>(std::llabs(lit)) > f.num_vars)
                throw ParseError(line_no, "literal " + std::to_string(lit) + " exceeds the declared variable count");
            if (cur.empty()) cur_line = line_no;
            cur.push_back(static_cast<int>(lit));
        } while (ls >> tok);
    }
    if (!header) throw ParseError(line_no, "missing problem line");
    if (!cur.empty()) throw ParseError(cur_line, "clause not terminated by 0");
    if (f.clauses.size() != declared_clauses)
        throw ParseError(line_no, "problem line declares " + std::to_string(declared_clauses) + " clauses, found " +
                                      std::to_string(f.clauses.size()));
    try {
        f.validate();
    } catch (const DomainError& e) {
        throw ParseError(line_no, e.what());
    }
    std::vector<std::size_t> occ(f.num_vars + 1, 0);
    for (const auto& c : f.clauses) {
        std::set<std::size_t> vars;
        for (int lit : c) vars.insert(static_cast<std::size_t>(std::abs(lit)));
        for (auto v : vars) ++occ[v];
    }
    f.occurrence_cap = *std::max_element(occ.begin(), occ.end());
    return f;
}

std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f) {
    if (f.num_vars > 24) throw PreconditionError("exhaustive SAT search is limited to 24 variables");
    const std::uint64_t total = 1ULL << f.num_vars;
    for (std::uint64_t a = 0; a < total; ++a) {
        bool ok = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const std::vector<int>& c) {
            return std::any_of(c.begin(), c.end(), [&](int lit) {
                bool val = (a >> (std::abs(lit) - 1)) & 1;
                return lit > 0 ? val : !val;
            });
        });
        if (ok) {
            std::vector<bool> out(f.num_vars);
            for (std::size_t i = 0; i < f.num_vars; ++i) out[i] = (a >> i) & 1;
            return out;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<std::size_t> clauses_with(const CnfFormula& f, int lit) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < f.clauses.size(); ++c)
        if (std::find(f.clauses[c].begin(), f.clauses[c].end(), lit) != f.clauses[c].end()) out.push_back(c);
    return out;
}

}  // namespace

SatSetCover sat_to_setcover(const CnfFormula& f, const Rational& eta_prime) {
    f.validate();
    if (eta_prime <= 0 || eta_prime >= 1) throw DomainError("eta' must lie in (0, 1)");
    SatSetCover out;
    const std::size_t t = f.clauses.size(), n = f.num_vars;
    out.num_clauses = t;
    out.esc.universe_size = t + n;
    for (std::size_t v = 1; v <= n; ++v) {
        for (bool positive : {true, false}) {
            int lit = positive ? static_cast<int>(v) : -static_cast<int>(v);
            std::vector<std::size_t> cl = clauses_with(f, lit);
            if (cl.size() > kMaxLiteralOccurrences)
                throw DomainError("literal " + std::to_string(lit) + " occurs in " + std::to_string(cl.size()) +
                                  " clauses, more than " + std::to_string(kMaxLiteralOccurrences));
            for (std::uint64_t mask = 0; mask < (1ULL << cl.size()); ++mask) {
                SetLabel label{v, positive, {}};
                std::vector<std::size_t> set;
                for (std::size_t b = 0; b < cl.size(); ++b)
                    if ((mask >> b) & 1) {
                        label.clauses.push_back(cl[b]);
                        set.push_back(cl[b]);
                    }
                set.push_back(t + v - 1);
                out.esc.sets.push_back(std::move(set));
                out.labels.push_back(std::move(label));
            }
        }
    }
    out.esc.d = n;
    Rational cp(static_cast<long>(f.occurrence_cap));
    out.esc.eta = 1 / (1 + (1 - eta_prime) / (3 * cp));
    return out;
}

std::vector<std::size_t> setcover_witness(const CnfFormula& f, const SatSetCover& sc,
                                          const std::vector<bool>& assignment) {
    if (assignment.size() != f.num_vars) throw DomainError("assignment has the wrong length");
    std::map<std::tuple<std::size_t, bool, std::vector<std::size_t>>, std::size_t> index;
    for (std::size_t j = 0; j < sc.labels.size(); ++j)
        index[{sc.labels[j].var, sc.labels[j].positive, sc.labels[j].clauses}] = j;
    std::vector<bool> taken(f.clauses.size(), false);
    std::vector<std::size_t> out;
    for (std::size_t v = 1; v <= f.num_vars; ++v) {
        bool pos = assignment[v - 1];
        int lit = pos ? static_cast<int>(v) : -static_cast<int>(v);
        std::vector<std::size_t> s;
        for (std::size_t c : clauses_with(f, lit))
            if (!taken[c]) {
                s.push_back(c);
                taken[c] = true;
            }
        auto it = index.find({v, pos, s});
        if (it == index.end()) throw DomainError("witness set missing from the instance");
        out.push_back(it->second);
    }
    return out;
}

namespace {

Integer ceil_real(const Real& x) {
    Integer z;
    mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDU);
    return z;
}

Integer floor_real(const Real& x) {
    Integer z;
    mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDD);
    return z;
}

// numerator / 2^p
Number over_two_pow(const NormExponent& p, long numerator) {
    if (p.is_integer()) return Number(Rational(numerator) / rational_pow(Rational(2), p.integer));
    Real v = Real(numerator) * pow(Real(2), -p.p);
    return Number(RealApprox(v, ulp_of(v) * 4));
}

}  // namespace

AgCvpInstance pad_cvp_with_integer_gadget(const CvpInstance& inst, std::size_t n_dagger) {
    const Basis& b = inst.basis;
    const std::size_t d = b.d(), n = b.n();
    std::vector<std::string> bad;
    if (d < n) bad.push_back("basis has fewer rows than columns");
    if (b.has_row_scales()) bad.push_back("row scales present");
    if (inst.target.size() != d) bad.push_back("target length");
    const std::size_t k = d >= n ? d - n : 0;
    if (bad.empty()) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (b.at(k + i, j) != (i == j ? 1 : 0)) {
                    bad.push_back("bottom block is not the identity");
                    i = n;
                    break;
                }
        for (std::size_t i = 0; i < n; ++i)
            if (inst.target[k + i] != Rational(1, 2)) {
                bad.push_back("bottom target entries are not 1/2");
                break;
            }
        Order o = compare(inst.r_pow, over_two_pow(inst.p, static_cast<long>(n + 1)));
        if (o == Order::Less || o == Order::Greater) bad.push_back("r is not (n+1)^(1/p)/2");
    }
    if (!bad.empty()) {
        std::string msg = "instance is not in the padded-CVP shape:";
        for (const auto& s : bad) msg += " " + s + ";";
        throw DomainError(msg);
    }
    AgCvpInstance out;
    out.p = inst.p;
    out.basis = n_dagger == 0 ? b : direct_sum(b, Basis::identity(n_dagger));
    out.target = inst.target;
    out.target.insert(out.target.end(), n_dagger, Rational(1, 2));
    out.r_pow = over_two_pow(inst.p, static_cast<long>(n + n_dagger + 1));
    out.s_pow = Number(Rational(1));
    out.gamma_pow = Number(Rational(1));
    const std::size_t total = n + n_dagger;
    Number big = out.r_pow + Number(Rational(1));
    auto q = ShiftedBallQuery::uniform(inst.p, total, big, Number(Rational(0)));
    CountBounds cb = inst.p.is_integer() ? count_exact(q) : count_interval(q, Rational(1, 1000000));
    RealApprox sq = root(Rational(static_cast<long>(total)), 2);
    out.A = ceil_real(sq.hi() * to_real(cb.hi));
    out.G = integer_pow(Integer(2), static_cast<unsigned>(n_dagger));
    return out;
}

AgCvpInstance setcover_to_agcvp(const SetCoverInstance& esc, const GadgetParams& params, const ScaledGadget& gadget) {
    esc.validate();
    const NormExponent& p = params.p;
    if (!p.is_integer()) throw DomainError("the set-cover stage needs an integer p");
    const std::size_t k = esc.universe_size, m = esc.sets.size();
    if (gadget.m != m) throw DomainError("gadget was scaled for a different number of sets");
    const Rational d = esc.no_bound();
    if (gadget.d != d || gadget.eta != esc.eta) throw DomainError("gadget was scaled for a different (d, eta)");
    if (gadget.r_pow < d) throw DomainError("hypothesis fails: r >= d^(1/p)");
    for (std::size_t j = 0; j < m; ++j)
        if (esc.sets[j].empty()) throw DomainError("set " + std::to_string(j) + " is empty");

    const double entries = double(k + m + gadget.n_dagger) * double(m + gadget.n_dagger);
    if (entries > double(kMaxDenseEntries))
        throw PreconditionError("B-hat would have " + std::to_string(k + m + gadget.n_dagger) + " x " +
                                std::to_string(m + gadget.n_dagger) + " entries; n_dagger = " +
                                std::to_string(gadget.n_dagger) + " is beyond desk scale");

    std::vector<std::vector<Rational>> rows(k + m, std::vector<Rational>(m));
    std::vector<RowScale> scales(k + m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t u : esc.sets[j]) rows[u][j] = 1;
        rows[k + j][j] = 1;
    }
    for (std::size_t u = 0; u < k; ++u) scales[u] = RowScale{gadget.r_star_pow, p.integer};
    Basis bhat(std::move(rows), std::move(scales));

    AgCvpInstance out;
    out.p = p;
    out.basis = direct_sum(bhat, gadget.basis(params));
    out.target.assign(k, Rational(1));
    out.target.resize(k + m, Rational(0));
    auto gt = gadget.target(params);
    out.target.insert(out.target.end(), gt.begin(), gt.end());
    out.r_pow = Number(gadget.r_pow);
    out.s_pow = Number(gadget.s_pow);
    out.gamma_pow = Number(gadget.gamma_pow);
    GoodGadgetCheck c;
    try {
        c = certify_good_gadget(params, gadget);
    } catch (const std::exception& e) {
        throw DomainError(std::string("counting bound failed: ") + e.what());
    }
    out.A = ceil_real(c.lhs_hi);
    out.G = c.close_lo;
    return out;
}

SparsificationPlan plan_sparsification(const AgCvpInstance& inst, const ReductionOverrides& ov) {
    if (inst.A < 1 || inst.G < 1) throw DomainError("A and G must be positive");
    SparsificationPlan plan;
    plan.guarantee_precondition = inst.G >= 1000 * inst.A;
    if (!plan.guarantee_precondition && !ov.any())
        throw PreconditionError("G >= 1000 A fails (A = " + inst.A.str() + ", G = " + inst.G.str() +
                                "); pass overrides to run outside the guarantee");
    plan.out_of_guarantee = !plan.guarantee_precondition || ov.any();
    plan.M = 10 * sqrt(to_real(inst.A) * to_real(inst.G));
    const Real logM = log(plan.M);
    const Real d = Real(static_cast<long>(inst.basis.d()));
    if (ov.ell) {
        plan.ell = *ov.ell;
    } else {
        Real e = ceil(100 * d * logM);
        if (e > Real(1e7)) throw PreconditionError("ell = " + to_string(e, 6) + " repetitions cannot be materialized");
        plan.ell = static_cast<std::size_t>(e.convert_to<double>());
    }
    if (plan.ell == 0) throw DomainError("ell must be positive");
    plan.q_lo = ceil_real(10 * plan.M * logM);
    plan.q_hi = floor_real(20 * plan.M * logM);
    plan.q = next_prime(ov.q_min ? *ov.q_min : plan.q_lo);
    if (!ov.q_min && plan.q > plan.q_hi) throw DomainError("no prime in [10 M log M, 20 M log M]");
    if (ov.delta) {
        plan.delta = *ov.delta;
    } else {
        Real mq = plan.M / to_real(plan.q);
        plan.delta = floor_to_grid(mq / 20 - mq * mq / 200, Integer(1) << 64);
    }
    if (plan.delta <= 0) throw DomainError("delta must be positive; with a reduced q pass an explicit delta");
    plan.threshold = ceil_rational(plan.delta * Rational(static_cast<long>(plan.ell)));
    return plan;
}

Basis lift_instance(const AgCvpInstance& inst) {
    const Basis& b = inst.basis;
    const std::size_t d = b.d(), n = b.n();
    if (inst.target.size() != d) throw DomainError("target dimension does not match the basis");
    std::vector<std::vector<Rational>> rows(d + 1, std::vector<Rational>(n + 1));
    std::vector<RowScale> scales(b.scales());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = b.at(i, j);
        rows[i][n] = -inst.target[i];
    }
    rows[d][n] = 1;
    if (inst.s_pow.is_exact() && inst.s_pow.rational() == 1) {
        scales.push_back(RowScale{});
    } else if (inst.s_pow.is_exact() && inst.p.is_integer()) {
        scales.push_back(RowScale{inst.s_pow.rational(), inst.p.integer});
    } else {
        throw DomainError("s^p must be rational with an integer p");
    }
    return Basis(std::move(rows), std::move(scales));
}

ReductionTranscript agcvp_to_svp_instances(const AgCvpInstance& inst, std::uint64_t seed,
                                           const ReductionOverrides& ov) {
    ReductionTranscript tr;
    tr.seed = seed;
    tr.overrides = ov;
    tr.agcvp = inst;
    tr.plan = plan_sparsification(inst, ov);
    const std::size_t d = inst.basis.d(), n = inst.basis.n();
    if (static_cast<double>(tr.plan.ell) * static_cast<double>((d + 1) * (n + 1)) > 5e8)
        throw PreconditionError("transcript too large to materialize");
    Basis lifted = lift_instance(inst);
    Number r_prime = inst.r_pow + inst.s_pow;
    for (std::size_t i = 0; i < tr.plan.ell; ++i) {
        std::uint64_t s = derive_seed(seed, i);
        tr.trial_seeds.push_back(s);
        tr.svp.push_back({sparsify(lifted, tr.plan.q, s).basis, r_prime, inst.p});
    }
    return tr;
}

void decide_transcript(ReductionTranscript& tr, const OracleBudget& budget) {
    tr.answers.clear();
    tr.yes_count = tr.refused_count = 0;
    for (const auto& inst : tr.svp) {
        OracleResult r = svp_decide(inst.basis, inst.p, inst.r_pow, budget);
        tr.answers.push_back(r.decision);
        if (r.decision == Decision::Yes) ++tr.yes_count;
        if (r.decision == Decision::Refused) ++tr.refused_count;
    }
    if (tr.refused_count > 0)
        tr.decision = Decision::Refused;
    else
        tr.decision = Rational(static_cast<long>(tr.yes_count)) > tr.plan.delta * Rational(static_cast<long>(tr.plan.ell))
                          ? Decision::Yes
                          : Decision::No;
}

EmbedResult embed_l2_to_lp(const Basis& b, const NormExponent& p, double eps, std::uint64_t seed, double oversample,
                           std::size_t samples) {
    if (p.p < 1 || p.p > 2) throw DomainError("embedding is supported for 1 <= p <= 2 only");
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
    if (!(oversample > 0)) throw DomainError("oversample must be positive");
    if (b.has_row_scales()) throw DomainError("embedding expects a basis without row scales");
    const std::size_t d = b.d(), n = b.n();
    EmbedResult out;
    out.m = static_cast<std::size_t>(std::ceil(oversample * static_cast<double>(n) / (eps * eps)));
    const double pd = p.p.convert_to<double>();
    // E|g|^p for a standard normal
    const double moment = std::pow(2.0, pd / 2) * boost::math::tgamma((pd + 1) / 2) / std::sqrt(std::acos(-1.0));
    out.normalizer = pow(Real(static_cast<double>(out.m) * moment), Real(-1) / p.p);
    const double c = out.normalizer.convert_to<double>();

    std::mt19937_64 rng(derive_seed(seed, 0));
    std::normal_distribution<double> normal;
    std::vector<std::vector<Rational>> g(out.m, std::vector<Rational>(d));
    for (auto& row : g)
        for (auto& v : row) v = floor_to_grid(Real(c * normal(rng)), Integer(1) << 24);
    std::vector<std::vector<Rational>> rows(out.m, std::vector<Rational>(n));
    for (std::size_t k = 0; k < out.m; ++k)
        for (std::size_t i = 0; i < d; ++i) {
            if (g[k][i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (b.at(i, j) != 0) rows[k][j] += g[k][i] * b.at(i, j);
        }
    out.basis = Basis(std::move(rows));

    std::mt19937_64 dir(derive_seed(seed, 1));
    std::uniform_int_distribution<long> coef(-3, 3);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<long> x(n);
        bool nonzero = false;
        while (!nonzero) {
            for (auto& v : x) {
                v = coef(dir);
                nonzero |= v != 0;
            }
        }
        double l2 = 0, lp = 0;
        for (std::size_t i = 0; i < d; ++i) {
            double v = 0;
            for (std::size_t j = 0; j < n; ++j) v += to_double(b.at(i, j)) * static_cast<double>(x[j]);
            l2 += v * v;
        }
        for (std::size_t k = 0; k < out.m; ++k) {
            double v = 0;
            for (std::size_t j = 0; j < n; ++j) v += to_double(out.basis.at(k, j)) * static_cast<double>(x[j]);
            lp += std::pow(std::fabs(v), pd);
        }
        double ratio = std::pow(lp, 1 / pd) / std::sqrt(l2);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.samples = samples;
    out.distortion_min = samples ? lo : 1;
    out.distortion_max = samples ? hi : 1;
    return out;
}

StageError::StageError(const std::string& stage_name, const std::string& what, bool is_precondition)
    : std::runtime_error(stage_name + ": " + what), stage(stage_name), precondition(is_precondition) {}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const PreconditionError& e) {
        throw StageError(name, e.what(), true);
    } catch (const DomainError& e) {
        throw StageError(name, e.what(), true);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), false);
    }
}

}  // namespace

PipelineResult pipeline_sat_to_svp(const CnfFormula& f, const NormExponent& p, const PipelineParams& params,
                                   std::uint64_t seed) {
    PipelineResult res;
    res.setcover = stage("setcover", [&] { return sat_to_setcover(f, params.eta_prime); });
    const SetCoverInstance& esc = res.setcover.esc;
    res.gadget_params = stage("gadget", [&] {
        if (p.p <= 2) throw DomainError("the integer gadget needs p > 2");
        return integer_gadget_params(p, sqrt(to_real(esc.eta)));
    });
    res.gadget = stage("gadget", [&] {
        return scale_gadget(res.gadget_params, esc.sets.size(), esc.no_bound(), esc.eta, GadgetMode::ReportOnly,
                            params.overrides.n_dagger);
    });
    AgCvpInstance ag = stage("agcvp", [&] { return setcover_to_agcvp(esc, res.gadget_params, res.gadget); });
    res.transcript = stage("sparsify", [&] { return agcvp_to_svp_instances(ag, seed, params.overrides); });
    res.transcript.setcover = esc;
    OracleBudget budget = params.budget;
    if (params.overrides.rank_cap) budget.rank_cap = *params.overrides.rank_cap;
    stage("oracle", [&] {
        decide_transcript(res.transcript, budget);
        return 0;
    });
    return res;
}

// JSON

nlohmann::json to_json(const Basis& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : b.rows()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : r) row.push_back(to_string(v));
        rows.push_back(row);
    }
    nlohmann::json j{{"d", b.d()}, {"n", b.n()}, {"basis", rows}};
    if (b.has_row_scales()) {
        nlohmann::json sc = nlohmann::json::array();
        for (const auto& s : b.scales()) sc.push_back({{"radicand", to_string(s.radicand)}, {"root", s.root}});
        j["row_scales"] = sc;
    }
    return j;
}

nlohmann::json to_json(const SetCoverInstance& esc) {
    return {{"universe_size", esc.universe_size},
            {"sets", esc.sets},
            {"d", esc.d},
            {"eta", to_string(esc.eta)},
            {"no_bound", to_string(esc.no_bound())}};
}

namespace {

nlohmann::json rationals(const std::vector<Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

}  // namespace

nlohmann::json to_json(const AgCvpInstance& inst) {
    nlohmann::json j = to_json(inst.basis);
    j["target"] = rationals(inst.target);
    j["r_pow"] = inst.r_pow.str();
    j["s_pow"] = inst.s_pow.str();
    j["gamma_pow"] = inst.gamma_pow.str();
    j["A"] = inst.A.str();
    j["G"] = inst.G.str();
    j["p"] = inst.p.str();
    return j;
}

nlohmann::json to_json(const GadgetParams& g) {
    return {{"p", g.p.str()},
            {"t_star", to_string(g.t_star)},
            {"eps", to_string(g.eps)},
            {"delta", to_string(g.delta, 20)},
            {"C_r_pow", to_string(g.C_r_pow)},
            {"C_r", to_string(g.C_r.value, 20)},
            {"mu", to_string(g.mu.value, 20)},
            {"theta_ratio", to_string(g.theta_ratio.value, 20)},
            {"beta_first", to_string(g.beta_first.value, 20)},
            {"beta_second", to_string(g.beta_second.value, 20)},
            {"beta", to_string(g.beta.value, 20)}};
}

nlohmann::json to_json(const ScaledGadget& g) {
    const auto& h = g.hypotheses;
    return {{"m", g.m},
            {"d", to_string(g.d)},
            {"eta", to_string(g.eta)},
            {"n_dagger", g.n_dagger},
            {"proof_n_dagger", g.proof_n_dagger},
            {"C_dagger", to_string(g.C_dagger, 12)},
            {"alpha_pow", to_string(g.alpha_pow)},
            {"r_pow", to_string(g.r_pow)},
            {"s_pow", to_string(g.s_pow)},
            {"gamma_pow", to_string(g.gamma_pow)},
            {"r_star_pow", to_string(g.r_star_pow)},
            {"C_tilde", to_string(g.C_tilde.value, 12)},
            {"report_only", g.report_only},
            {"hypotheses",
             {{"eta_range", h.eta_range},
              {"eta_d_at_least_10", h.eta_d_at_least_10},
              {"eps_d_gap", h.eps_d_gap},
              {"delta_matches", h.delta_matches}}}};
}

nlohmann::json to_json(const ReductionTranscript& tr) {
    nlohmann::json j;
    j["seed"] = tr.seed;
    if (tr.setcover) j["setcover"] = to_json(*tr.setcover);
    if (tr.agcvp) j["agcvp"] = to_json(*tr.agcvp);
    const auto& pl = tr.plan;
    j["plan"] = {{"M", to_string(pl.M, 20)},
                 {"ell", pl.ell},
                 {"q", pl.q.str()},
                 {"q_range", {pl.q_lo.str(), pl.q_hi.str()}},
                 {"delta", to_string(pl.delta)},
                 {"threshold", pl.threshold.str()},
                 {"guarantee_precondition", pl.guarantee_precondition},
                 {"out_of_guarantee", pl.out_of_guarantee}};
    nlohmann::json ov = nlohmann::json::object();
    if (tr.overrides.ell) ov["ell"] = *tr.overrides.ell;
    if (tr.overrides.q_min) ov["q_min"] = tr.overrides.q_min->str();
    if (tr.overrides.delta) ov["delta"] = to_string(*tr.overrides.delta);
    if (tr.overrides.n_dagger) ov["n_dagger"] = *tr.overrides.n_dagger;
    if (tr.overrides.rank_cap) ov["rank_cap"] = *tr.overrides.rank_cap;
    j["overrides"] = ov;
    nlohmann::json inst = nlohmann::json::array();
    for (std::size_t i = 0; i < tr.svp.size(); ++i) {
        nlohmann::json e = to_json(tr.svp[i].basis);
        e["seed"] = tr.trial_seeds[i];
        e["r_pow"] = tr.svp[i].r_pow.str();
        if (i < tr.answers.size()) e["answer"] = to_string(tr.answers[i]);
        inst.push_back(e);
    }
    j["svp_instances"] = inst;
    j["yes_count"] = tr.yes_count;
    j["refused_count"] = tr.refused_count;
    if (tr.decision) j["decision"] = to_string(*tr.decision);
    return j;
}

}  // namespace lpsvp
