#include "anumrad/harness/sharpness.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "anumrad/error.hpp"
#include "anumrad/generators.hpp"
#include "anumrad/harness/verify.hpp"

namespace anumrad::harness {

namespace {

struct Candidate {
  ComplexMatrix t;
  std::optional<ComplexMatrix> s;
};

// Puts a raw draw back on the admissible set: inside B_A, A-selfadjoint when
// the chain asks for it, and ||.||_A = 1.
ComplexMatrix admissible(const SemiHilbertContext& ctx, ComplexMatrix x, bool selfadjoint) {
  const std::size_t n = ctx.dim();
  const ComplexMatrix& p = ctx.range_projector();
  x = x - p * x * (ComplexMatrix::identity(n) - p);
  if (selfadjoint) x = 0.5 * (x + a_adjoint(ctx, x));
  const double norm = a_op_seminorm(ctx, x);
  if (norm > 0.0) x *= cplx(1.0 / norm);
  return x;
}

class Search {
 public:
  Search(const SharpnessConfig& cfg, ContextPtr ctx) : cfg_(cfg), ctx_(std::move(ctx)) {}

  // +inf for instances the chain rejects, so the climb never moves there.
  double objective(const Candidate& c, InequalityChainReport* out = nullptr) {
    ++evaluations;
    try {
      auto r = evaluate_chain(cfg_.chain, ctx_, c.t, c.s, cfg_.sign);
      double v = r.min_margin();
      if (cfg_.pair) {
        if (*cfg_.pair >= r.margins.size()) {
          throw Error(ErrorCode::invalid_input, "sharpness: pair index out of range");
        }
        v = r.margins[*cfg_.pair];
      }
      if (out) *out = std::move(r);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_input) throw;
      return std::numeric_limits<double>::infinity();
    }
  }

  Candidate fresh(Rng& rng) {
    const bool sa = requires_selfadjoint(cfg_.chain);
    const std::size_t n = ctx_->dim();
    Candidate c{admissible(*ctx_, rand_ginibre(n, n, rng), sa), std::nullopt};
    if (needs_second_operator(cfg_.chain)) c.s = admissible(*ctx_, rand_ginibre(n, n, rng), sa);
    return c;
  }

  Candidate climb(Candidate c, double& value) {
    const bool sa = requires_selfadjoint(cfg_.chain);
    static constexpr std::array<cplx, 4> kDirs{cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
    const long stop = evaluations + cfg_.budget;
    double step = cfg_.initial_step;
    while (step >= cfg_.final_step && evaluations < stop) {
      bool improved = false;
      const std::size_t ops = c.s ? 2 : 1;
      for (std::size_t which = 0; which < ops && evaluations < stop; ++which) {
        const std::size_t count = c.t.rows() * c.t.cols();
        for (std::size_t k = 0; k < count && evaluations < stop; ++k) {
          for (cplx d : kDirs) {
            Candidate trial = c;
            ComplexMatrix& m = which == 0 ? trial.t : *trial.s;
            m.entries()[k] += step * d;
            m = admissible(*ctx_, std::move(m), sa);
            const double v = objective(trial);
            if (v < value) {
              value = v;
              c = std::move(trial);
              improved = true;
              // Keep going the same way with a growing stride while it pays.
              for (double stride = 2.0 * step; evaluations < stop; stride *= 2.0) {
                Candidate further = c;
                ComplexMatrix& f = which == 0 ? further.t : *further.s;
                f.entries()[k] += stride * d;
                f = admissible(*ctx_, std::move(f), sa);
                const double fv = objective(further);
                if (!(fv < value)) break;
                value = fv;
                c = std::move(further);
              }
              break;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return c;
  }

  long evaluations = 0;

 private:
  const SharpnessConfig& cfg_;
  ContextPtr ctx_;
};

}  // namespace

SharpnessResult run_sharpness(const SharpnessConfig& config) {
  if (config.dim < 2 && !config.weight) throw Error(ErrorCode::invalid_input, "dim must be >= 2");
  if (config.restarts < 0) throw Error(ErrorCode::invalid_input, "restarts must be >= 0");
  const SeedSpec spec{config.seed, 0};
  ComplexMatrix a = config.weight ? *config.weight
                                  : rand_psd(config.dim, config.dim, spec.substream(1));
  const ContextPtr ctx = share(make_context(a));
  Search search(config, ctx);
  Rng rng(spec.substream(2));

  Candidate best = search.fresh(rng);
  InequalityChainReport best_report{config.chain};
  double best_value = search.objective(best, &best_report);

  for (int r = 0; r < config.restarts; ++r) {
    Candidate start = r == 0 ? best : search.fresh(rng);
    double value = r == 0 ? best_value : search.objective(start);
    Candidate end = search.climb(std::move(start), value);
    if (value < best_value) {
      best_value = value;
      best = std::move(end);
    }
  }
  search.objective(best, &best_report);

  return SharpnessResult{config,
                         std::move(a),
                         std::move(best.t),
                         std::move(best.s),
                         std::move(best_report),
                         best_value,
                         config.restarts,
                         search.evaluations};
}

Json sharpness_to_json(const SharpnessResult& r) {
  Json j;
  j["schema"] = "anumrad.sharpness_report/1";
  j["version"] = version_string();
  j["chain"] = to_string(r.config.chain);
  j["dim"] = r.a.rows();
  j["restarts"] = r.restarts_run;
  j["seed"] = r.config.seed;
  j["pair"] = r.config.pair ? Json(*r.config.pair) : Json(nullptr);
  j["evaluations"] = r.evaluations;
  j["objective"] = std::isfinite(r.objective) ? Json(r.objective) : Json(nullptr);
  j["report"] = chain_report_to_json(r.report);
  j["A"] = matrix_to_json(r.a);
  j["T"] = matrix_to_json(r.t);
  j["S"] = r.s ? matrix_to_json(*r.s) : Json(nullptr);
  return j;
}

}  // namespace anumrad::harness
