#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "topmix/diagram_metric.hpp"
#include "topmix/pointcloud.hpp"

using namespace topmix;

namespace {

PersistenceDiagram dgm(std::vector<PersistencePair> pairs, double cap = 20.0) {
  return PersistenceDiagram{0, std::move(pairs), cap};
}

}  // namespace

TEST(Wasserstein, IdenticalDiagramsAreAtZero) {
  const auto d = dgm({{0, 1}, {0, 3}, {0, 20}});
  EXPECT_EQ(wasserstein(d, d), 0.0);
  EXPECT_EQ(wasserstein(d, d, 2.0), 0.0);
  EXPECT_EQ(bottleneck(d, d), 0.0);
  EXPECT_EQ(wasserstein(dgm({}), dgm({})), 0.0);
}

TEST(Wasserstein, SinglePairShift) {
  EXPECT_DOUBLE_EQ(wasserstein(dgm({{0, 1}}), dgm({{0, 3}})), 2.0);
}

TEST(Wasserstein, PointToDiagonal) {
  EXPECT_DOUBLE_EQ(wasserstein(dgm({{0, 2}}), dgm({})), 1.0);
  EXPECT_DOUBLE_EQ(wasserstein(dgm({}), dgm({{0, 2}})), 1.0);
}

TEST(Bottleneck, PrefersDiagonalWhenCheaper) {
  // Direct match costs 3; sending both to the diagonal costs max(0.5, 1.5).
  EXPECT_DOUBLE_EQ(bottleneck(dgm({{0, 1}}), dgm({{0, 4}})), 2.0);
  EXPECT_DOUBLE_EQ(bottleneck(dgm({{0, 1}}), dgm({{0, 3}})), 1.5);
}

TEST(Wasserstein, SymmetryBrokenMirrorRecords) {
  const auto dx = rips_dim0_diagram(build_point_cloud(std::vector<double>{6, 8}), 20.0);
  const auto dy = rips_dim0_diagram(build_point_cloud(std::vector<double>{7, 7}), 20.0);
  EXPECT_DOUBLE_EQ(wasserstein(dx, dy), 2.0);
  const auto ux = rips_dim0_diagram(build_point_cloud(std::vector<double>{1, 2}), 20.0);
  const auto uy = rips_dim0_diagram(build_point_cloud(std::vector<double>{2, 1}), 20.0);
  EXPECT_EQ(wasserstein(ux, uy), 0.0);
}

TEST(Wasserstein, EssentialPairsCancel) {
  // Shared (0, cap) pairs contribute nothing.
  EXPECT_DOUBLE_EQ(wasserstein(dgm({{0, 1}, {0, 20}}), dgm({{0, 3}, {0, 20}})), 2.0);
}

TEST(Wasserstein, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto a = oracle::random_diagram(rng, t % 4, 10.0);
    const auto b = oracle::random_diagram(rng, (t / 4) % 4, 10.0);
    const double p = (t % 3 == 0) ? 1.0 : (t % 3 == 1 ? 2.0 : 3.5);
    const double want = oracle::brute_force_wasserstein(a, b, p);
    EXPECT_NEAR(wasserstein(a, b, p), want, 1e-12 * std::max(1.0, want));
    EXPECT_EQ(bottleneck(a, b), oracle::brute_force_matching(a, b, 1.0, true));
  }
}

TEST(Wasserstein, ExactlySymmetric) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_diagram(rng, 1 + t % 12, 10.0);
    const auto b = oracle::random_diagram(rng, 1 + (t * 7) % 12, 10.0);
    EXPECT_EQ(wasserstein(a, b), wasserstein(b, a));
    EXPECT_EQ(wasserstein(a, b, 2.0), wasserstein(b, a, 2.0));
    EXPECT_EQ(bottleneck(a, b), bottleneck(b, a));
  }
}

TEST(Wasserstein, TriangleInequality) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_diagram(rng, 1 + t % 9, 10.0);
    const auto b = oracle::random_diagram(rng, 1 + (t + 3) % 9, 10.0);
    const auto c = oracle::random_diagram(rng, 1 + (t + 5) % 9, 10.0);
    EXPECT_LE(wasserstein(a, c), wasserstein(a, b) + wasserstein(b, c) + 1e-9);
  }
}

TEST(Wasserstein, LargeOrderApproachesBottleneck) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    // At most 4 matched slots, so W_32 <= 4^(1/32) * bottleneck < 1.05 * bottleneck.
    const auto a = oracle::random_diagram(rng, 1 + t % 2, 10.0);
    const auto b = oracle::random_diagram(rng, 1 + (t / 2) % 2, 10.0);
    const double db = bottleneck(a, b);
    const double w = wasserstein(a, b, 32.0);
    EXPECT_GE(w, db - 1e-9);
    EXPECT_LE(w, db * 1.05 + 1e-12);
  }
}

TEST(Wasserstein, Contracts) {
  EXPECT_THROW(wasserstein(dgm({}, 1.0), dgm({}, 2.0)), ContractError);
  auto h1 = dgm({});
  h1.dimension = 1;
  EXPECT_THROW(wasserstein(dgm({}), h1), ContractError);
  EXPECT_THROW(wasserstein(dgm({}), dgm({}), 0.5), ContractError);
  EXPECT_THROW(wasserstein(dgm({}), dgm({}), INFINITY), ContractError);
  EXPECT_THROW(bottleneck(dgm({}, 1.0), dgm({}, 2.0)), ContractError);
}

TEST(DistanceMatrix, SmallCases) {
  const std::vector<PersistenceDiagram> one{dgm({{0, 1}})};
  const auto m1 = distance_matrix(one);
  ASSERT_EQ(m1.size(), 1u);
  EXPECT_EQ(m1(0, 0), 0.0);

  const std::vector<PersistenceDiagram> twin{dgm({{0, 1}}), dgm({{0, 1}})};
  EXPECT_EQ(distance_matrix(twin).data(), std::vector<double>(4, 0.0));

  const std::vector<PersistenceDiagram> mixed{dgm({{0, 1}}), dgm({{0, 1}}, 5.0)};
  EXPECT_THROW(distance_matrix(mixed), ContractError);
}

TEST(DistanceMatrix, SymmetricAndThreadIndependent) {
  std::mt19937_64 rng(47);
  std::vector<PersistenceDiagram> ds;
  for (int i = 0; i < 40; ++i) ds.push_back(oracle::random_diagram(rng, 3 + i % 8, 10.0));
  const auto serial = distance_matrix(ds, 1.0, 1);
  EXPECT_TRUE(serial.is_distance_like());
  EXPECT_EQ(distance_matrix(ds, 1.0, 4), serial);
  EXPECT_EQ(distance_matrix(ds, 1.0, 13), serial);
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) EXPECT_EQ(serial(i, j), wasserstein(ds[i], ds[j]));
}

TEST(Wasserstein, SharedEssentialPairsAgreeWithOracle) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    auto a = oracle::random_diagram(rng, t % 3, 10.0);
    auto b = oracle::random_diagram(rng, (t / 3) % 3, 10.0);
    for (int e = 0; e < 1 + t % 2; ++e) a.pairs.push_back({0.0, 10.0});
    b.pairs.push_back({0.0, 10.0});
    const double p = t % 2 ? 1.0 : 2.5;
    const double want = oracle::brute_force_wasserstein(a, b, p);
    EXPECT_NEAR(wasserstein(a, b, p), want, 1e-12 * std::max(1.0, want));
    EXPECT_EQ(bottleneck(a, b), oracle::brute_force_matching(a, b, 1.0, true));
  }
}
