#include "wrec/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "wrec/errors.hpp"

namespace wrec {
namespace {

void check_inputs(std::span<const ItemIndex> targets, std::size_t r) {
  if (targets.empty()) throw MetricError("metric undefined for an empty target set");
  if (r < 1) throw ConfigError("cutoff R must be >= 1");
}

bool is_target(std::span<const ItemIndex> targets, ItemIndex item) {
  return std::binary_search(targets.begin(), targets.end(), item);
}

}  // namespace

double recall_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r) {
  check_inputs(targets, r);
  const std::size_t depth = std::min(r, ranked.entries.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < depth; ++k) hits += is_target(targets, ranked.entries[k].item);
  return static_cast<double>(hits) / static_cast<double>(std::min(r, targets.size()));
}

double dcg_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r) {
  check_inputs(targets, r);
  const std::size_t depth = std::min(r, ranked.entries.size());
  double dcg = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    // rank = k + 1, gain 2^1 - 1 = 1 on a hit.
    if (is_target(targets, ranked.entries[k].item)) dcg += 1.0 / std::log2(static_cast<double>(k + 2));
  }
  return dcg;
}

double ndcg_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r) {
  const double dcg = dcg_at_r(ranked, targets, r);
  double ideal = 0.0;
  const std::size_t best = std::min(r, targets.size());
  for (std::size_t k = 0; k < best; ++k) ideal += 1.0 / std::log2(static_cast<double>(k + 2));
  return dcg / ideal;
}

EvalReport evaluate(const HeldOutSet& heldout, const SimilarityMatrix& b,
                    std::span<const std::size_t> cutoffs) {
  if (cutoffs.empty()) throw ConfigError("evaluate: at least one cutoff is required");
  for (std::size_t r : cutoffs) {
    if (r < 1) throw ConfigError("evaluate: cutoffs must be >= 1");
  }
  if (heldout.targets.size() != heldout.n_users()) {
    throw DimensionError("evaluate: held-out set has mismatched target lists");
  }

  EvalReport report;
  report.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  std::sort(report.cutoffs.begin(), report.cutoffs.end());
  report.cutoffs.erase(std::unique(report.cutoffs.begin(), report.cutoffs.end()), report.cutoffs.end());
  const std::size_t n = report.cutoffs.back();
  const auto lists = batch_recommend(heldout, b, n);

  for (std::size_t u = 0; u < heldout.n_users(); ++u) {
    if (heldout.targets[u].empty()) {
      ++report.excluded_users;
      report.exclusion_reasons.push_back("user " + heldout.foldin.user_id(u) +
                                         ": empty target set");
      continue;
    }
    report.evaluated_users.push_back(u);
  }
  report.n_users_evaluated = report.evaluated_users.size();
  if (report.n_users_evaluated == 0) throw MetricError("evaluate: no evaluable users");

  for (std::size_t r : report.cutoffs) {
    auto& recall = report.recall[r];
    auto& ndcg = report.ndcg[r];
    for (std::size_t u : report.evaluated_users) {
      recall.per_user.push_back(recall_at_r(lists[u], heldout.targets[u], r));
      ndcg.per_user.push_back(ndcg_at_r(lists[u], heldout.targets[u], r));
    }
    for (auto* series : {&recall, &ndcg}) {
      double sum = 0.0;
      for (double v : series->per_user) sum += v;
      series->mean = sum / static_cast<double>(series->per_user.size());
    }
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  nlohmann::ordered_json ndcg = nlohmann::ordered_json::object();
  for (std::size_t r : report.cutoffs) {
    recall[std::to_string(r)] = report.recall.at(r).mean;
    ndcg[std::to_string(r)] = report.ndcg.at(r).mean;
  }
  nlohmann::ordered_json j;
  j["cutoffs"] = report.cutoffs;
  j["metrics"] = {{"recall", recall}, {"ndcg", ndcg}};
  j["n_users_evaluated"] = report.n_users_evaluated;
  j["excluded_users"] = report.excluded_users;
  return j.dump(2) + "\n";
}

void write_per_user_csv(std::ostream& out, const EvalReport& report,
                        const std::vector<std::string>& user_ids) {
  out << "user_id";
  for (std::size_t r : report.cutoffs) out << ",recall@" << r << ",ndcg@" << r;
  out << '\n';
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < report.evaluated_users.size(); ++k) {
    out << user_ids.at(report.evaluated_users[k]);
    for (std::size_t r : report.cutoffs) {
      out << ',' << report.recall.at(r).per_user[k] << ',' << report.ndcg.at(r).per_user[k];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace wrec
