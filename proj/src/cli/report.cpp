#include "qss/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qss/analysis.hpp"
#include "qss/quadrature.hpp"

namespace qss::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ProtocolConfig iteration_config(const RunConfig& rc, std::size_t i, double k) {
  ProtocolConfig c = rc.protocol;
  if (!rc.iteration_strengths.empty()) {
    c.channel->strengths = {rc.iteration_strengths[i]};
  }
  if (rc.reverse_optimal) {
    c.wmrqm->reverse = analysis::r_opt(k, c.wmrqm->forward, c.channel->strength_for(0));
  }
  return c;
}

// Closed-form fidelity for a three-party branch, when one exists.
std::function<double(double)> closed_form(const ProtocolConfig& c, int alice) {
  if (c.parties != 2 || (c.channel && c.channel->strengths.size() != 1)) {
    return {};
  }
  if (!c.channel) {
    if (c.wmrqm) {
      return {};
    }
    return [](double) { return 1.0; };
  }
  const double x = c.channel->strengths.front();
  if (c.channel->kind == ChannelKind::PhaseDamping) {
    if (c.wmrqm) {
      return {};
    }
    return [x](double k) { return analysis::f_pd(k, x); };
  }
  if (!c.wmrqm) {
    if (alice == 0) {
      return [x](double k) { return analysis::f_ad(k, x); };
    }
    return [x](double k) { return analysis::f_ad_outcome1(k, x); };
  }
  const auto w = *c.wmrqm;
  if (alice == 0) {
    return [w, x](double k) { return analysis::f0_ww(k, w.forward, w.reverse, x); };
  }
  return [w, x](double k) { return analysis::f1_ww(k, w.reverse, x); };
}

struct Residuals {
  double trace = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double analytic = kNaN;

  void absorb(const ProtocolConfig& c, double k, const IterationReport& r) {
    if (r.skipped()) {
      return;
    }
    trace = std::max(trace, std::abs(r.reconstructed_state->trace() - 1.0));
    min_eigenvalue = std::min(min_eigenvalue, eigenvalues(r.reconstructed_state->matrix()).front());
    if (auto f = closed_form(c, r.alice_outcome)) {
      const double diff = std::abs(f(k) - r.fidelity);
      analytic = std::isnan(analytic) ? diff : std::max(analytic, diff);
    }
  }
};

Json echo(const RunConfig& rc, double zero_probability) {
  const auto& p = rc.protocol;
  Json j;
  j["parties"] = p.parties;
  j["iterations"] = p.iterations;
  if (p.channel) {
    j["channel"] = std::string(to_string(p.channel->kind));
    if (rc.iteration_strengths.empty()) {
      Json s = Json::array();
      for (double v : p.channel->strengths) {
        s.push_back(json_real(v));
      }
      j["strength"] = s;
    } else {
      Json s = Json::array();
      for (double v : rc.iteration_strengths) {
        s.push_back(json_real(v));
      }
      j["iteration_strengths"] = s;
    }
  } else {
    j["channel"] = "none";
  }
  if (p.wmrqm) {
    j["wmrqm"] = {{"weak_strength", json_real(p.wmrqm->forward)},
                  {"reverse_strength", rc.reverse_optimal ? Json("opt") : json_real(p.wmrqm->reverse)}};
  } else {
    j["wmrqm"] = nullptr;
  }
  if (p.return_trip) {
    j["return_trip"] = {{"channel", std::string(to_string(p.return_trip->kind))},
                        {"strength", json_real(p.return_trip->strength_for(0))}};
  } else {
    j["return_trip"] = nullptr;
  }
  j["average_over_k"] = rc.average_over_k;
  if (!rc.average_over_k) {
    Json secrets = Json::array();
    for (std::size_t i = 0; i < rc.secret_k.size(); ++i) {
      secrets.push_back({{"k", json_real(rc.secret_k[i])}, {"phase", json_real(rc.secret_phase[i])}});
    }
    j["secrets"] = secrets;
  }
  j["zero_probability"] = json_real(zero_probability);
  return j;
}

Json branch_json(const IterationReport& r, double probability, double fidelity) {
  Json b;
  b["outcome"] = r.outcome_label();
  b["alice"] = r.alice_outcome;
  std::string signs;
  for (auto s : r.collaborator_outcomes) {
    signs += to_char(s);
  }
  b["collaborators"] = signs;
  b["correction"] = std::string(to_string(r.correction_applied));
  b["probability"] = json_real(probability);
  b["fidelity"] = json_real(fidelity);
  b["skipped"] = std::isnan(fidelity);
  return b;
}

}  // namespace

Json json_real(double value) {
  if (!std::isfinite(value)) {
    return nullptr;
  }
  return round_real(value);
}

Json run_report(const RunConfig& rc, std::optional<double> zero_probability) {
  RunConfig cfg = rc;
  if (zero_probability) {
    cfg.protocol.zero_probability = *zero_probability;
  }
  const auto& base = cfg.protocol;
  const std::size_t n_iter = base.iterations;

  Json out;
  out["command"] = "run";
  out["config"] = echo(cfg, base.zero_probability);

  Residuals res;
  double probability_sum_residual = 0.0;
  Json iterations = Json::array();
  double fid_total = 0.0;
  double succ_total = 0.0;
  std::size_t fid_count = 0;

  if (!cfg.average_over_k) {
    SequentialSession session(base.parties);
    for (std::size_t i = 0; i < n_iter; ++i) {
      const auto& secret = base.secrets[i];
      const auto c = iteration_config(cfg, i, secret.k());
      const auto reports = session.recycle_and_rerun(secret, c);
      const auto agg = aggregate(reports);
      Json it;
      it["index"] = i;
      it["secret"] = {{"k", json_real(cfg.secret_k[i])}, {"phase", json_real(cfg.secret_phase[i])}};
      if (c.channel) {
        it["channel_strength"] = json_real(c.channel->strength_for(0));
      }
      if (c.wmrqm) {
        it["reverse_strength"] = json_real(c.wmrqm->reverse);
      }
      Json branches = Json::array();
      for (const auto& r : reports) {
        branches.push_back(branch_json(r, r.branch_probability, r.fidelity));
        res.absorb(c, secret.k(), r);
      }
      it["branches"] = branches;
      it["success_probability"] = json_real(agg.success_probability);
      it["fidelity"] = json_real(agg.fidelity);
      if (!c.wmrqm) {
        probability_sum_residual = std::max(probability_sum_residual, std::abs(agg.success_probability - 1.0));
      } else if (c.channel && c.parties == 2 && c.channel->kind == ChannelKind::AmplitudeDamping) {
        const double expected =
            analysis::sp2(secret.k(), c.wmrqm->forward, c.wmrqm->reverse, c.channel->strength_for(0));
        probability_sum_residual =
            std::max(probability_sum_residual, std::abs(agg.success_probability - expected));
      }
      iterations.push_back(it);
      succ_total += agg.success_probability;
      if (!std::isnan(agg.fidelity)) {
        fid_total += agg.fidelity;
        ++fid_count;
      }
    }
  } else {
    // Per iteration and branch: integrals over k of probability and
    // conditional fidelity, plus the integral of the aggregate fidelity.
    const auto& nodes = quadrature::unit_interval_nodes();
    std::vector<std::vector<IterationReport>> labels(n_iter);
    std::vector<std::vector<double>> prob(n_iter), fid(n_iter), fid_weight(n_iter);
    std::vector<double> agg_fid(n_iter, 0.0), agg_weight(n_iter, 0.0), agg_succ(n_iter, 0.0);
    for (const auto& node : nodes) {
      SequentialSession session(base.parties);
      const auto secret = Secret::from_k(node.x);
      for (std::size_t i = 0; i < n_iter; ++i) {
        const auto c = iteration_config(cfg, i, node.x);
        const auto reports = session.recycle_and_rerun(secret, c);
        if (labels[i].empty()) {
          labels[i] = reports;
          prob[i].assign(reports.size(), 0.0);
          fid[i].assign(reports.size(), 0.0);
          fid_weight[i].assign(reports.size(), 0.0);
        }
        for (std::size_t b = 0; b < reports.size(); ++b) {
          prob[i][b] += node.weight * reports[b].branch_probability;
          if (!reports[b].skipped()) {
            fid[i][b] += node.weight * reports[b].fidelity;
            fid_weight[i][b] += node.weight;
          }
          res.absorb(c, node.x, reports[b]);
        }
        const auto agg = aggregate(reports);
        agg_succ[i] += node.weight * agg.success_probability;
        if (!std::isnan(agg.fidelity)) {
          agg_fid[i] += node.weight * agg.fidelity;
          agg_weight[i] += node.weight;
        }
        if (!c.wmrqm) {
          probability_sum_residual = std::max(probability_sum_residual, std::abs(agg.success_probability - 1.0));
        }
      }
    }
    for (std::size_t i = 0; i < n_iter; ++i) {
      const auto c = iteration_config(cfg, i, 0.5);
      Json it;
      it["index"] = i;
      it["secret"] = "average_over_k";
      if (c.channel) {
        it["channel_strength"] = json_real(c.channel->strength_for(0));
      }
      if (c.wmrqm) {
        it["reverse_strength"] = json_real(c.wmrqm->reverse);
      }
      Json branches = Json::array();
      for (std::size_t b = 0; b < labels[i].size(); ++b) {
        const double f = fid_weight[i][b] > 0.0 ? fid[i][b] / fid_weight[i][b] : kNaN;
        branches.push_back(branch_json(labels[i][b], prob[i][b], f));
      }
      it["branches"] = branches;
      it["success_probability"] = json_real(agg_succ[i]);
      const double f = agg_weight[i] > 0.0 ? agg_fid[i] / agg_weight[i] : kNaN;
      it["fidelity"] = json_real(f);
      iterations.push_back(it);
      succ_total += agg_succ[i];
      if (!std::isnan(f)) {
        fid_total += f;
        ++fid_count;
      }
    }
  }

  out["iterations"] = iterations;
  out["aggregate_fidelity"] = json_real(fid_count > 0 ? fid_total / static_cast<double>(fid_count) : kNaN);
  out["success_probability"] = json_real(succ_total / static_cast<double>(n_iter));
  Json v;
  v["max_trace_residual"] = json_real(res.trace);
  v["min_eigenvalue"] = json_real(res.min_eigenvalue);
  v["probability_sum_residual"] = json_real(probability_sum_residual);
  v["closed_form_residual"] = json_real(res.analytic);
  out["validation"] = v;
  return out;
}

}  // namespace qss::cli
