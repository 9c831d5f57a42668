#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wrec/ingest.hpp"
#include "wrec/recommend.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

/// Targets are a sorted item set.
double recall_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r);

/// Base-2 DCG@R.
double dcg_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r);

/// DCG@R over the ideal DCG with min(R, |targets|) hits at the top.
double ndcg_at_r(const RankedList& ranked, std::span<const ItemIndex> targets, std::size_t r);

struct MetricSeries {
  double mean = 0.0;
  std::vector<double> per_user;
};

struct EvalReport {
  std::vector<std::size_t> cutoffs;
  std::map<std::size_t, MetricSeries> recall;
  std::map<std::size_t, MetricSeries> ndcg;
  std::vector<std::size_t> evaluated_users;  // rows of the held-out set
  std::size_t n_users_evaluated = 0;
  std::size_t excluded_users = 0;
  std::vector<std::string> exclusion_reasons;
};

EvalReport evaluate(const HeldOutSet& heldout, const SimilarityMatrix& b,
                    std::span<const std::size_t> cutoffs);

/// {cutoffs, metrics: {recall: {R: mean}, ndcg: {R: mean}}, n_users_evaluated, excluded_users}
std::string report_to_json(const EvalReport& report);

/// user_id, then recall@R and ndcg@R columns per cutoff.
void write_per_user_csv(std::ostream& out, const EvalReport& report,
                        const std::vector<std::string>& user_ids);

}  // namespace wrec
