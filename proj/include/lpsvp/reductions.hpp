#pragma once

#include "lpsvp/gadgets.hpp"
#include "lpsvp/lattice.hpp"
#include "lpsvp/oracles.hpp"
#include "lpsvp/setcover.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lpsvp {

struct ParseError : DomainError {
    ParseError(std::size_t line, const std::string& what);
    std::size_t line;
};

struct CnfFormula {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::size_t width = 0;             // longest clause
    std::size_t occurrence_cap = 0;    // C': most clauses mentioning one variable
    std::size_t duplicates_removed = 0;

    void validate() const;
};

// max_width: reject clauses longer than this.
CnfFormula parse_dimacs(const std::string& text, std::optional<std::size_t> max_width = 3);

// Satisfying assignment (index 0 is variable 1), by exhaustive search over at most 2^24 assignments.
std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f);

struct SetLabel {
    std::size_t var = 0;  // 1-based
    bool positive = true;
    std::vector<std::size_t> clauses;  // 0-based clause indices in the set
};

struct SatSetCover {
    SetCoverInstance esc;
    std::vector<SetLabel> labels;
    std::size_t num_clauses = 0;  // universe rows 0..t-1 are clauses, then variables
};

constexpr std::size_t kMaxLiteralOccurrences = 20;

SatSetCover sat_to_setcover(const CnfFormula& f, const Rational& eta_prime = Rational(1, 2));
// The disjoint cover read off a satisfying assignment.
std::vector<std::size_t> setcover_witness(const CnfFormula& f, const SatSetCover& sc,
                                          const std::vector<bool>& assignment);

// CVP instance of the form B = (Phi; I_n), bottom target entries 1/2, r^p = (n+1)/2^p.
AgCvpInstance pad_cvp_with_integer_gadget(const CvpInstance& inst, std::size_t n_dagger);

// Largest basis (rows x columns) the set-cover stage will materialize.
constexpr std::size_t kMaxDenseEntries = 25'000'000;

// Rows of B-hat: universe elements (scaled by r*), then the m identity rows, then the gadget rows.
AgCvpInstance setcover_to_agcvp(const SetCoverInstance& esc, const GadgetParams& params, const ScaledGadget& gadget);

struct ReductionOverrides {
    std::optional<std::size_t> ell;
    std::optional<Integer> q_min;
    std::optional<Rational> delta;
    std::optional<std::size_t> n_dagger;
    std::optional<std::size_t> rank_cap;
    bool any() const { return ell || q_min || delta || n_dagger || rank_cap; }
};

struct SparsificationPlan {
    Real M;
    std::size_t ell = 0;
    Integer q;
    Integer q_lo, q_hi;  // declared range [10 M log M, 20 M log M]
    Rational delta;      // YES iff more than delta * ell trials answer YES
    Integer threshold;   // ceil(delta ell)
    bool guarantee_precondition = false;  // G >= 1000 A
    bool out_of_guarantee = false;
};

struct ReductionTranscript {
    std::uint64_t seed = 0;
    std::optional<SetCoverInstance> setcover;
    std::optional<AgCvpInstance> agcvp;
    SparsificationPlan plan;
    std::vector<SvpInstance> svp;
    std::vector<std::uint64_t> trial_seeds;
    ReductionOverrides overrides;
    // filled by decide_transcript
    std::vector<Decision> answers;
    std::size_t yes_count = 0;
    std::size_t refused_count = 0;
    std::optional<Decision> decision;
};

// B' = (B, -t; 0, s)
Basis lift_instance(const AgCvpInstance& inst);
SparsificationPlan plan_sparsification(const AgCvpInstance& inst, const ReductionOverrides& ov = {});
ReductionTranscript agcvp_to_svp_instances(const AgCvpInstance& inst, std::uint64_t seed,
                                           const ReductionOverrides& ov = {});
// YES iff the number of YES answers exceeds delta * ell; any refusal makes the decision REFUSED.
void decide_transcript(ReductionTranscript& tr, const OracleBudget& budget);

struct EmbedResult {
    Basis basis;
    std::size_t m = 0;
    Real normalizer;  // (m E|g|^p)^(-1/p)
    double distortion_min = 0;  // min ||f(v)||_p / ||v||_2 over sampled lattice directions
    double distortion_max = 0;
    std::size_t samples = 0;
};

EmbedResult embed_l2_to_lp(const Basis& b, const NormExponent& p, double eps, std::uint64_t seed,
                           double oversample = 1.0, std::size_t samples = 1000);

struct PipelineParams {
    Rational eta_prime = Rational(1, 2);
    ReductionOverrides overrides;
    OracleBudget budget;
};

struct PipelineResult {
    SatSetCover setcover;
    GadgetParams gadget_params;
    ScaledGadget gadget;
    ReductionTranscript transcript;
};

PipelineResult pipeline_sat_to_svp(const CnfFormula& f, const NormExponent& p, const PipelineParams& params,
                                   std::uint64_t seed);

// A stage failure, tagged with the stage that raised it.
struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what, bool precondition);
    std::string stage;
    bool precondition;
};

nlohmann::json to_json(const Basis& b);
nlohmann::json to_json(const SetCoverInstance& esc);
nlohmann::json to_json(const AgCvpInstance& inst);
nlohmann::json to_json(const ReductionTranscript& tr);
nlohmann::json to_json(const GadgetParams& g);
nlohmann::json to_json(const ScaledGadget& g);

}  // namespace lpsvp
