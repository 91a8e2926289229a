#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support/instances.hpp"
#include "support/oracle.hpp"
#include "twotier/equilibrium.hpp"
#include "twotier/error.hpp"
#include "twotier/pivot.hpp"
#include "twotier/reference_data.hpp"

using namespace twotier;

namespace {

ElectorateConfig make_config(std::array<int, 3> n, std::array<double, 3> p) {
  ElectorateConfig c;
  c.group_sizes = n;
  c.support_rates = p;
  return c;
}

std::map<std::pair<int, int>, double> as_map(const TallyDistribution& d) {
  std::map<std::pair<int, int>, double> m;
  for (const TallyEntry& e : d.entries) {
    m[{e.tally.votes_a, e.tally.votes_b}] = e.probability;
  }
  return m;
}

}  // namespace

TEST(TallyDistribution, BinomialWithoutAbstention) {
  const auto m = as_map(tally_distribution(2, 0.5, 1.0, 1.0));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m.at({2, 0}), 0.25);
  EXPECT_DOUBLE_EQ(m.at({1, 1}), 0.5);
  EXPECT_DOUBLE_EQ(m.at({0, 2}), 0.25);
}

TEST(TallyDistribution, NobodyVotes) {
  const auto m = as_map(tally_distribution(5, 0.3, 0.0, 0.0));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at({0, 0}), 1.0);
}

TEST(TallyDistribution, OnlyASupportersVote) {
  const auto m = as_map(tally_distribution(3, 0.5, 1.0, 0.0));
  ASSERT_EQ(m.size(), 4u);
  EXPECT_DOUBLE_EQ(m.at({0, 0}), 0.125);
  EXPECT_DOUBLE_EQ(m.at({1, 0}), 0.375);
  EXPECT_DOUBLE_EQ(m.at({2, 0}), 0.375);
  EXPECT_DOUBLE_EQ(m.at({3, 0}), 0.125);
}

TEST(TallyDistribution, SumsToOneAndMatchesTrinomial) {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = std::uniform_int_distribution<int>(0, 21)(gen);
    const double p = fixtures::dyadic(gen);
    const double ta = fixtures::dyadic(gen);
    const double tb = fixtures::dyadic(gen);
    const TallyDistribution d = tally_distribution(n, p, ta, tb);
    EXPECT_LE(d.entries.size(),
              static_cast<std::size_t>((n + 1) * (n + 2) / 2));
    double total = 0.0;
    const double qa = p * ta;
    const double qb = (1 - p) * tb;
    for (const TallyEntry& e : d.entries) {
      total += e.probability;
      const int a = e.tally.votes_a;
      const int b = e.tally.votes_b;
      const double expected =
          std::exp(std::lgamma(n + 1.0) - std::lgamma(a + 1.0) -
                   std::lgamma(b + 1.0) - std::lgamma(n - a - b + 1.0)) *
          std::pow(qa, a) * std::pow(qb, b) * std::pow(1 - qa - qb, n - a - b);
      EXPECT_NEAR(e.probability, expected, 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(WinProbability, SymmetricConfigurationIsEven) {
  const auto& c1 = reference::configuration(1).config;
  EXPECT_NEAR(win_probability_a(c1, Rule::wta, StrategyProfile(0.359)), 0.5,
              1e-12);
  EXPECT_NEAR(win_probability_a(c1, Rule::pr, StrategyProfile(0.7)), 0.5,
              1e-12);
}

TEST(WinProbability, SmallHandCases) {
  EXPECT_EQ(win_probability_a(make_config({1, 1, 1}, {1, 1, 1}), Rule::wta,
                              StrategyProfile(1.0)),
            1.0);
  EXPECT_NEAR(win_probability_a(make_config({1, 1, 1}, {0.5, 0.5, 0.5}),
                                Rule::wta, StrategyProfile(1.0)),
              0.5, 1e-15);
}

TEST(Pivot, HandEnumeration) {
  // Voting wins iff one of the other two groups goes A (3/4); abstaining
  // leaves group 1 to a coin (1/2).
  const auto config = make_config({1, 1, 1}, {0.5, 0.5, 0.5});
  EXPECT_NEAR(pivot_probability(config, Rule::wta, StrategyProfile(1.0), 0,
                                Candidate::a),
              0.25, 1e-15);
}

TEST(Pivot, DominatedWeightIsZero) {
  const auto config = make_config({1, 21, 21}, {0.5, 0.0, 0.0});
  StrategyProfile t(1.0);
  for (Rule rule : {Rule::wta, Rule::pr}) {
    EXPECT_EQ(pivot_probability(config, rule, t, 0, Candidate::a), 0.0);
  }
}

TEST(Pivot, ZeroParticipationIsAllCoins) {
  const auto& c1 = reference::configuration(1).config;
  const PivotVector pi = pivot_vector(c1, Rule::wta, StrategyProfile(0.0));
  for (double v : pi.pi) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(PivotVector, SymmetricProfileHasEqualComponents) {
  for (int id : {1, 2, 3, 10, 11}) {
    const auto& c = reference::configuration(id).config;
    for (Rule rule : {Rule::wta, Rule::pr}) {
      const PivotVector pi = pivot_vector(c, rule, StrategyProfile(0.4));
      for (int g = 0; g < kNumGroups; ++g) {
        EXPECT_NEAR(pi(g, Candidate::a), pi(g, Candidate::b), 1e-12);
      }
    }
  }
}

TEST(PivotVector, EquilibriumPivotsReflectCutpoints) {
  const auto& c1 = reference::configuration(1).config;
  const PivotVector pi = pivot_vector(c1, Rule::wta, StrategyProfile(0.359));
  // pi = t c_bar / beta at a fixed point; t is printed to three decimals.
  for (double v : pi.pi) EXPECT_NEAR(v, 0.0718, 0.002);

  const auto& c15 = reference::configuration(15).config;
  const EquilibriumResult eq = solve(c15, Rule::pr);
  EXPECT_GE(pivot_probability(c15, Rule::pr, eq.profile, 0, Candidate::a),
            0.2);
}

TEST(Pivot, MatchesExhaustiveEnumeration) {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 3);
    for (TieConvention tc : {TieConvention::coin, TieConvention::split}) {
      const PivotOptions opts{tc, false};
      EXPECT_NEAR(win_probability_a(inst.config, inst.rule, inst.profile, opts),
                  oracle::expected_credit_a(inst.config, inst.rule,
                                            inst.profile, tc),
                  1e-12);
      for (int g = 0; g < kNumGroups; ++g) {
        for (Candidate c : {Candidate::a, Candidate::b}) {
          EXPECT_NEAR(
              pivot_probability(inst.config, inst.rule, inst.profile, g, c,
                                opts),
              oracle::pivot(inst.config, inst.rule, inst.profile, g, c, tc),
              1e-12)
              << "rep " << rep << " group " << g;
        }
      }
    }
  }
}

// Mirrored supports are summed in a different order, so "exact" means
// agreement to a few ulps.
constexpr double kSwapTolerance = 1e-14;

TEST(Pivot, LabelSwapSymmetryIsExact) {
  std::mt19937_64 gen(77);
  for (int rep = 0; rep < 12; ++rep) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 21);
    const ElectorateConfig swapped = swap_labels(inst.config);
    const StrategyProfile swapped_t = swap_labels(inst.profile);
    const PivotVector pi = pivot_vector(inst.config, inst.rule, inst.profile);
    const PivotVector ps = pivot_vector(swapped, inst.rule, swapped_t);
    for (int g = 0; g < kNumGroups; ++g) {
      EXPECT_NEAR(pi(g, Candidate::a), ps(g, Candidate::b), kSwapTolerance);
      EXPECT_NEAR(pi(g, Candidate::b), ps(g, Candidate::a), kSwapTolerance);
    }
    EXPECT_NEAR(win_probability_a(inst.config, inst.rule, inst.profile),
                1.0 - win_probability_a(swapped, inst.rule, swapped_t),
                kSwapTolerance);
  }
}

TEST(Pivot, FocalDecompositionRecombines) {
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 10; ++rep) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 21);
    const double whole =
        win_probability_a(inst.config, inst.rule, inst.profile);
    for (int g = 0; g < kNumGroups; ++g) {
      const FocalWinProbabilities f = focal_win_probabilities(
          inst.config, inst.rule, inst.profile, g);
      const double p = inst.config.support_rates[g];
      const double qa = p * inst.profile(g, Candidate::a);
      const double qb = (1 - p) * inst.profile(g, Candidate::b);
      EXPECT_NEAR(qa * f.vote_a + qb * f.vote_b + (1 - qa - qb) * f.abstain,
                  whole, 1e-10);
    }
  }
}

TEST(Pivot, AllGroupsPassMatchesSingleGroupCalls) {
  std::mt19937_64 gen(9);
  const fixtures::Instance inst = fixtures::random_instance(gen, 5, 21);
  const auto all =
      focal_win_probabilities_all(inst.config, inst.rule, inst.profile);
  for (int g = 0; g < kNumGroups; ++g) {
    const auto one =
        focal_win_probabilities(inst.config, inst.rule, inst.profile, g);
    EXPECT_NEAR(all[g].vote_a, one.vote_a, 1e-12);
    EXPECT_NEAR(all[g].abstain, one.abstain, 1e-12);
    EXPECT_NEAR(all[g].vote_b, one.vote_b, 1e-12);
  }
}

TEST(Pivot, PruningChangesResultsNegligibly) {
  const auto& c = reference::configuration(6).config;
  const StrategyProfile t({0.05, 0.9, 0.4, 0.4, 0.4, 0.4});
  const PivotVector exact = pivot_vector(c, Rule::pr, t);
  const PivotVector pruned = pivot_vector(c, Rule::pr, t, {TieConvention::coin, true});
  for (std::size_t k = 0; k < kNumTypes; ++k) {
    EXPECT_NEAR(exact.pi[k], pruned.pi[k], 1e-12);
  }
}

TEST(Pivot, StaysInUnitInterval) {
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 10; ++rep) {
    const fixtures::Instance inst = fixtures::random_instance(gen, 1, 21);
    for (double v : pivot_vector(inst.config, inst.rule, inst.profile).pi) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Pivot, RejectsBadGroupIndex) {
  const auto& c = reference::configuration(1).config;
  EXPECT_THROW(pivot_probability(c, Rule::wta, StrategyProfile(0.5), 3,
                                 Candidate::a),
               ValidationError);
}
