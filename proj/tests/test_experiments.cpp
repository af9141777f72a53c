#include <catch2/catch_amalgamated.hpp>

#include "oqslab/io.hpp"

using namespace oqslab;

namespace {

ExperimentConfig cfg(int ds, int db, int trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.dim_s = ds;
  c.dim_b = db;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("folklore-cp experiment") {
  const auto rep = exp_folklore_cp(cfg(2, 2, 50, 7));
  CHECK(rep.verdict);
  CHECK(rep.metrics.at("worstMinChoiEigenvalue") >= -1e-9);
  CHECK(rep.metrics.at("worstTpResidual") <= 1e-9);
  CHECK(rep.trials.size() == 50);

  SECTION("identity override gives the identity map") {
    ExperimentConfig c = cfg(2, 2, 1, 7);
    c.unitary_override = Mat::Identity(4, 4);
    const auto r = exp_folklore_cp(c);
    CHECK(r.verdict);
    CHECK(std::abs(r.metrics.at("worstMinChoiEigenvalue")) < 1e-10);
  }
}

TEST_CASE("property1-witness experiment") {
  const auto rep = exp_property1(cfg(2, 2, 25, 3));
  CHECK(rep.verdict);
  CHECK(rep.metrics.at("minWitnessGain") > 1e-3);

  SECTION("injected sigma_x x sigma_x perturbation") {
    ExperimentConfig c = cfg(2, 2, 1, 3);
    Mat sx(2, 2);
    sx << 0, 1, 1, 0;
    c.delta_override = kron(sx, sx);
    const auto r = exp_property1(c);
    CHECK(r.verdict);
    // CNOT oracle: the full image 2*sigma_x has norm 2sqrt2, i.e. norm 1
    // after the unit normalization of delta; any witness must reach 1e-3.
    CHECK(r.metrics.at("minWitnessGain") > 1e-3);
  }
}

TEST_CASE("hadamard-constraint experiment") {
  for (auto [ds, db] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 2}}) {
    DYNAMIC_SECTION("dims " << ds << "x" << db) {
      const auto rep = exp_hadamard_constraint(cfg(ds, db, 1, 5));
      CHECK(rep.verdict);
      CHECK(rep.metrics.at("solutionSpaceDim") == db * db);
    }
  }
  SECTION("every independent constraint is necessary for the collapse") {
    const RMat m = hadamard_constraint_matrix(2, 2);
    // the 2*ds operator equations sum to zero, so exactly one is redundant:
    // dropping it keeps the solution space at db^2 ...
    const RMat minimal = m.topRows(m.rows() - 4);
    CHECK(nullspace_basis(minimal).cols() == 4);
    // ... and dropping any further equation enlarges it
    for (int drop = 0; drop < 3; ++drop) {
      RMat pruned(minimal.rows() - 4, minimal.cols());
      pruned.topRows(drop * 4) = minimal.topRows(drop * 4);
      pruned.bottomRows(pruned.rows() - drop * 4) =
          minimal.bottomRows(minimal.rows() - (drop + 1) * 4);
      CHECK(nullspace_basis(pruned).cols() > 4);
    }
  }
}

TEST_CASE("theorem2-pipeline experiment") {
  for (auto [ds, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    DYNAMIC_SECTION("dims " << ds << "x" << db) {
      const auto rep = exp_theorem2_pipeline(cfg(ds, db, 1, 9));
      CHECK(rep.verdict);
      CHECK(rep.stages.size() == 4);
      for (const auto& st : rep.stages) CHECK(st.pass);
    }
  }
}

TEST_CASE("commuting-gap experiment") {
  const auto rep = exp_commuting_gap(cfg(3, 2, 50, 11));
  CHECK(rep.verdict);
  CHECK(rep.metrics.at("spanDim") == 3);
  CHECK(rep.metrics.at("affineDim") == 2);

  SECTION("all bath states equal still leaves the span diagonal") {
    // folklore-on-a-simplex: span stays d_S, extension underdetermined
    Rng rng(1);
    const DensityMatrix b = random_density(2, rng);
    AssignmentFamily fam;
    fam.dim_s = 3;
    fam.dim_b = 2;
    std::vector<DensityMatrix> baths = {b, b, b};
    for (int t = 0; t < 20; ++t) {
      RVec p(3);
      for (int j = 0; j < 3; ++j) p(j) = 0.05 + rng.uniform();
      p /= p.sum();
      fam.members.push_back(
          cq_state(CQSpec(p, OrthonormalBasis::computational(3), baths)));
    }
    CHECK(audit_family(fam).span_dim == 3);
    CHECK_THROWS_AS(induced_map(fam, haar_unitary(6, rng)), Underdetermined);
  }
}

TEST_CASE("sl-necessity experiment") {
  ExperimentConfig c = cfg(2, 2, 1, 13);
  c.eps = 0.1;
  c.budget = 200;
  const auto rep = exp_sl_necessity(c);
  CHECK(rep.verdict);
  CHECK(rep.metrics.at("bestMinChoiEigenvalue") <= -1e-4);
  CHECK(rep.metrics.at("maxDiscordResidual") > 1e-3);

  SECTION("eps = 0 control finds no violation") {
    ExperimentConfig c0 = cfg(2, 2, 1, 13);
    c0.eps = 0.0;
    c0.budget = 200;
    const auto r0 = exp_sl_necessity(c0);
    CHECK(r0.verdict);
    CHECK(r0.metrics.at("bestMinChoiEigenvalue") >= -1e-9);
  }
}

TEST_CASE("experiments are deterministic given the seed") {
  const auto a = report_to_json(exp_folklore_cp(cfg(2, 2, 10, 99)));
  const auto b = report_to_json(exp_folklore_cp(cfg(2, 2, 10, 99)));
  CHECK(dump_json(a) == dump_json(b));

  const auto h1 = report_to_json(exp_hadamard_constraint(cfg(2, 2, 1, 4)));
  const auto h2 = report_to_json(exp_hadamard_constraint(cfg(2, 2, 1, 4)));
  CHECK(dump_json(h1) == dump_json(h2));
}

TEST_CASE("dispatcher validates names and dimensions") {
  CHECK_THROWS_AS(run_experiment("no-such-exp", cfg(2, 2, 1, 0)), ParseError);
  CHECK_THROWS_AS(run_experiment("folklore-cp", cfg(1, 2, 1, 0)), ParseError);
  CHECK_THROWS_AS(run_experiment("folklore-cp", cfg(2, 2, 0, 0)), ParseError);
}
