#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"
#include "wrec/autoencoder.hpp"
#include "wrec/errors.hpp"
#include "wrec/evalmetrics.hpp"

namespace wrec {
namespace {

RankedList ranked(std::vector<ItemIndex> items) {
  RankedList l;
  double score = 1.0;
  for (ItemIndex i : items) l.entries.push_back({i, score -= 0.01});
  return l;
}

TEST(Recall, HandValues) {
  const std::vector<ItemIndex> targets{0, 1};
  EXPECT_DOUBLE_EQ(recall_at_r(ranked({0, 2, 3}), targets, 3), 0.5);
  EXPECT_DOUBLE_EQ(recall_at_r(ranked({1, 0, 3}), targets, 3), 1.0);
  EXPECT_DOUBLE_EQ(recall_at_r(ranked({2, 3, 4}), targets, 3), 0.0);
  // Only min(R, |targets|) hits are possible.
  EXPECT_DOUBLE_EQ(recall_at_r(ranked({0, 2}), targets, 1), 1.0);
  // Ranks past the list contribute nothing.
  EXPECT_DOUBLE_EQ(recall_at_r(ranked({0}), targets, 5), 0.5);
}

TEST(Ndcg, HandValues) {
  const std::vector<ItemIndex> one{7};
  EXPECT_DOUBLE_EQ(ndcg_at_r(ranked({7, 1, 2}), one, 1), 1.0);
  EXPECT_NEAR(ndcg_at_r(ranked({1, 7, 2}), one, 3), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(ndcg_at_r(ranked({1, 7, 2}), one, 3), 0.63093, 1e-5);
  EXPECT_DOUBLE_EQ(ndcg_at_r(ranked({1, 2, 3}), one, 3), 0.0);
  EXPECT_NEAR(dcg_at_r(ranked({1, 7}), one, 2), 1.0 / std::log2(3.0), 1e-15);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(recall_at_r(ranked({1}), {}, 3), MetricError);
  EXPECT_THROW(ndcg_at_r(ranked({1}), {}, 3), MetricError);
  const std::vector<ItemIndex> t{1};
  EXPECT_THROW(recall_at_r(ranked({1}), t, 0), ConfigError);
}

TEST(Metrics, PropertiesAgainstNaiveOracle) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ItemIndex> pool(40);
    for (ItemIndex i = 0; i < 40; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<ItemIndex> list(pool.begin(), pool.begin() + 25);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<ItemIndex> targets(pool.begin(), pool.begin() + 1 + rng() % 12);
    std::sort(targets.begin(), targets.end());
    double prev_recall = 0.0;
    for (std::size_t r = 1; r <= 30; ++r) {
      const double rec = recall_at_r(ranked(list), targets, r);
      const double nd = ndcg_at_r(ranked(list), targets, r);
      EXPECT_NEAR(rec, testing::naive_recall(list, targets, r), 1e-12);
      EXPECT_NEAR(nd, testing::naive_ndcg(list, targets, r), 1e-12);
      EXPECT_GE(rec, 0.0);
      EXPECT_LE(rec, 1.0);
      EXPECT_GE(nd, 0.0);
      EXPECT_LE(nd, 1.0 + 1e-15);
      // Recall here is hits / min(R, |I_u|); it is only monotone once R >= |I_u|.
      if (r >= targets.size()) {
        EXPECT_GE(rec, prev_recall - 1e-15);
        prev_recall = rec;
      }
    }
  }
}

TEST(Ndcg, OneExactlyWhenLeadingRanksAreTargets) {
  const std::vector<ItemIndex> targets{2, 5, 9};
  EXPECT_DOUBLE_EQ(ndcg_at_r(ranked({5, 2, 0, 9}), targets, 2), 1.0);
  EXPECT_LT(ndcg_at_r(ranked({5, 2, 0, 9}), targets, 4), 1.0);
  EXPECT_DOUBLE_EQ(ndcg_at_r(ranked({9, 5, 2, 0}), targets, 4), 1.0);
}

SimilarityMatrix identity_sim(std::size_t n) {
  SimilarityMatrix s;
  s.values = DenseMatrix::identity(n);
  return s;
}

TEST(Evaluate, PerfectRankingAndMean) {
  // B = [[0,1],[1,0]]: the other item always ranks first.
  SimilarityMatrix b;
  b.values = DenseMatrix({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
  HeldOutSet h{InteractionMatrix({{0}, {0}}, 3), {{1}, {2}}};
  const std::vector<std::size_t> cutoffs{1};
  auto rep = evaluate(h, b, cutoffs);
  EXPECT_EQ(rep.recall.at(1).per_user, (std::vector<double>{1.0, 0.0}));
  EXPECT_DOUBLE_EQ(rep.recall.at(1).mean, 0.5);
  EXPECT_DOUBLE_EQ(rep.ndcg.at(1).mean, 0.5);
  EXPECT_EQ(rep.n_users_evaluated, 2u);
}

TEST(Evaluate, ExcludesUsersWithoutTargets) {
  HeldOutSet h{InteractionMatrix({{0}, {1}}, 3), {{}, {2}}};
  const std::vector<std::size_t> cutoffs{2};
  auto rep = evaluate(h, identity_sim(3), cutoffs);
  EXPECT_EQ(rep.n_users_evaluated, 1u);
  EXPECT_EQ(rep.excluded_users, 1u);
  EXPECT_EQ(rep.evaluated_users, (std::vector<std::size_t>{1}));

  HeldOutSet none{InteractionMatrix({{0}}, 3), {{}}};
  EXPECT_THROW(evaluate(none, identity_sim(3), cutoffs), MetricError);
  EXPECT_THROW(evaluate(h, identity_sim(3), {}), ConfigError);
}

TEST(Evaluate, MatchesNaiveReimplementation) {
  std::mt19937_64 rng(72);
  auto train = testing::random_binary(50, 30, 0.3, rng);
  auto b = ridge(train, {.lambda = 3.0});
  auto foldin = testing::random_binary(20, 30, 0.2, rng);
  std::vector<std::vector<ItemIndex>> targets(foldin.n_users());
  for (std::size_t u = 0; u < foldin.n_users(); ++u) {
    for (ItemIndex i = 0; i < 30; ++i) {
      if (!foldin.contains(u, i) && rng() % 4 == 0) targets[u].push_back(i);
    }
  }
  targets[0].clear();
  HeldOutSet h{foldin, targets};
  const std::vector<std::size_t> cutoffs{5, 10, 20};
  auto rep = evaluate(h, b, cutoffs);

  for (std::size_t r : cutoffs) {
    double rsum = 0, nsum = 0;
    std::size_t n = 0;
    for (std::size_t u = 0; u < foldin.n_users(); ++u) {
      if (targets[u].empty()) continue;
      std::vector<ItemIndex> seen(foldin.row(u).begin(), foldin.row(u).end());
      auto order = testing::naive_ranking(b.values, seen);
      rsum += testing::naive_recall(order, targets[u], r);
      nsum += testing::naive_ndcg(order, targets[u], r);
      ++n;
    }
    EXPECT_NEAR(rep.recall.at(r).mean, rsum / n, 1e-12);
    EXPECT_NEAR(rep.ndcg.at(r).mean, nsum / n, 1e-12);
    EXPECT_EQ(rep.n_users_evaluated, n);
  }
}

TEST(Evaluate, JsonShape) {
  HeldOutSet h{InteractionMatrix({{0}, {1}}, 3), {{}, {2}}};
  const std::vector<std::size_t> cutoffs{2, 1};
  auto j = nlohmann::json::parse(report_to_json(evaluate(h, identity_sim(3), cutoffs)));
  EXPECT_EQ(j["cutoffs"], nlohmann::json({1, 2}));
  EXPECT_TRUE(j["metrics"]["recall"].contains("2"));
  EXPECT_TRUE(j["metrics"]["ndcg"].contains("1"));
  EXPECT_EQ(j["n_users_evaluated"], 1);
  EXPECT_EQ(j["excluded_users"], 1);
}

}  // namespace
}  // namespace wrec
