// Acceptance suite: runs every top-level criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "oqslab/io.hpp"

using namespace oqslab;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail = "") {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

std::filesystem::path work_dir() {
  static std::filesystem::path p = [] {
    auto dir = std::filesystem::temp_directory_path() /
               ("oqslab_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
  }();
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(OQSLAB_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json run_cli_report(const std::string& args, int* exit_code) {
  const std::string out = (work_dir() / "report.json").string();
  *exit_code = run_cli(args + " --out " + out);
  return parse_file(out);
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

// --------------------------------------------------------------------------

void criterion1_folklore_cp() {
  bool pass = true;
  std::ostringstream detail;
  for (auto [ds, db] :
       {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
    int code = 0;
    const json rep = run_cli_report(
        "run folklore-cp --dim-s " + std::to_string(ds) + " --dim-b " +
            std::to_string(db) + " --trials 200 --seed 7",
        &code);
    const double worst_eig =
        rep["metrics"]["worstMinChoiEigenvalue"].get<double>();
    const double worst_tp = rep["metrics"]["worstTpResidual"].get<double>();
    const bool ok = code == 0 && worst_eig >= -1e-9 && worst_tp <= 1e-9;
    pass = pass && ok;
    detail << ds << "x" << db << " eig " << worst_eig << "; ";
  }
  report(1, "folklore scheme closed under CP at all dimension pairs", pass,
         detail.str());
}

void criterion2_transpose() {
  Superoperator transpose;
  transpose.dim = 2;
  transpose.mat = Mat::Zero(4, 4);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) transpose.mat(j * 2 + k, k * 2 + j) = 1.0;
  const CPVerdict v = cp_verdict(transpose);
  const std::string path = (work_dir() / "transpose.json").string();
  write_superop_file(path, transpose);
  const int code = run_cli("check-cp " + path);
  const bool pass = !v.is_cp &&
                    std::abs(v.min_choi_eigenvalue + 1.0) <= 1e-9 &&
                    code == 3;
  report(2, "transpose map detected as non-CP with eigenvalue -1", pass,
         "min eig " + std::to_string(v.min_choi_eigenvalue) + ", exit " +
             std::to_string(code));
}

void criterion3_property1() {
  int code = 0;
  const json rep = run_cli_report(
      "run property1-witness --dim-s 2 --dim-b 2 --trials 100 --seed 7",
      &code);
  const double min_gain = rep["metrics"]["minWitnessGain"].get<double>();
  bool pass = code == 0 && min_gain >= 1e-3;
  for (const auto& t : rep["trials"]) pass = pass && t["pass"].get<bool>();

  // CNOT oracle on the injected perturbation
  Mat cnot = Mat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const Mat delta = kron(pauli_x(), pauli_x());
  const Mat image =
      partial_trace_bath(cnot * delta * cnot.adjoint(), 2, 2);
  pass = pass && (image - 2.0 * pauli_x()).norm() <= 1e-12;
  report(3, "ill-definedness witness found in 100/100 trials", pass,
         "min gain " + std::to_string(min_gain));
}

void criterion4_hadamard() {
  bool pass = true;
  std::ostringstream detail;
  for (auto [ds, db] :
       {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 2}}) {
    int code = 0;
    const json rep = run_cli_report(
        "run hadamard-constraint --dim-s " + std::to_string(ds) +
            " --dim-b " + std::to_string(db) + " --seed 7",
        &code);
    const int null_dim =
        static_cast<int>(rep["metrics"]["solutionSpaceDim"].get<double>());
    const double collapse =
        rep["metrics"]["collapseResidual"].get<double>();
    const bool ok = code == 0 && null_dim == db * db && collapse <= 1e-10;
    pass = pass && ok;
    detail << ds << "x" << db << " dim " << null_dim << "; ";
  }
  report(4, "unbiased-pair constraints collapse to one bath operator", pass,
         detail.str());
}

void criterion5_theorem2() {
  bool pass = true;
  std::ostringstream detail;
  for (auto [ds, db] :
       {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    int code = 0;
    const json rep = run_cli_report(
        "run theorem2-pipeline --dim-s " + std::to_string(ds) + " --dim-b " +
            std::to_string(db) + " --seed 7",
        &code);
    bool ok = code == 0 && rep["stages"].size() == 4;
    double closure = 0.0;
    for (const auto& st : rep["stages"]) {
      ok = ok && st["pass"].get<bool>();
      if (st["name"] == "span-closure")
        closure = st["residual"].get<double>();
    }
    ok = ok && closure <= 1e-9;
    pass = pass && ok;
    detail << ds << "x" << db << " closure " << closure << "; ";
  }
  report(5, "no-correlations pipeline passes all four stages", pass,
         detail.str());
}

void criterion6_commuting_gap() {
  bool pass = true;
  std::ostringstream detail;
  for (auto [ds, db] : {std::pair{2, 2}, std::pair{3, 2}}) {
    int code = 0;
    const json rep = run_cli_report(
        "run commuting-gap --dim-s " + std::to_string(ds) + " --dim-b " +
            std::to_string(db) + " --trials 50 --seed 7",
        &code);
    const int span = static_cast<int>(rep["metrics"]["spanDim"].get<double>());
    const int affine =
        static_cast<int>(rep["metrics"]["affineDim"].get<double>());
    bool underdet = false;
    for (const auto& st : rep["stages"])
      if (st["name"] == "underdetermined-extension")
        underdet = st["pass"].get<bool>();
    const bool ok = code == 0 && span == ds && affine == ds - 1 && underdet;
    pass = pass && ok;
    detail << ds << "x" << db << " span " << span << " affine " << affine
           << "; ";
  }
  report(6, "classical family spans d_S dimensions and stays "
            "underdetermined",
         pass, detail.str());
}

void criterion7_discord() {
  Rng rng(7);
  bool pass = true;
  double worst_cq = 0.0;
  for (int t = 0; t < 100; ++t) {
    RVec p(2);
    const double x = 0.1 + 0.35 * rng.uniform();
    p << 0.5 + x, 0.5 - x;
    const CQSpec spec(p, OrthonormalBasis(haar_unitary(2, rng)),
                      {random_density(2, rng), random_density(2, rng)});
    const DiscordVerdict v = zero_discord_test(cq_state(spec));
    worst_cq = std::max(worst_cq, v.residual);
    pass = pass && v.is_zero && v.residual <= 1e-8;
  }
  double least_ent = std::numeric_limits<double>::infinity();
  for (int used = 0; used < 100;) {
    const PureState psi = random_pure(4, rng);
    const BipartiteState rho(2, 2, psi.projector());
    const Mat marg = rho.system_marginal();
    if ((marg * marg).trace().real() >= 0.99) continue;
    ++used;
    const DiscordVerdict v = zero_discord_test(rho);
    least_ent = std::min(least_ent, v.residual);
    pass = pass && !v.is_zero && v.residual > 0.1;
  }
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DiscordVerdict bv =
      zero_discord_test(BipartiteState(2, 2, bell * bell.adjoint()));
  pass = pass && std::abs(bv.residual - 1.0) <= 1e-6;
  report(7, "discord classification separates cq and entangled states",
         pass,
         "worst cq residual " + std::to_string(worst_cq) +
             ", least entangled residual " + std::to_string(least_ent) +
             ", bell " + std::to_string(bv.residual));
}

void criterion8_sl_necessity() {
  int code = 0;
  const json rep = run_cli_report(
      "run sl-necessity --dim-s 2 --dim-b 2 --eps 0.1 --budget 500 --seed 7",
      &code);
  const double best = rep["metrics"]["bestMinChoiEigenvalue"].get<double>();
  // Regression constant frozen from the first passing run of this
  // deterministic search (seed 7, eps 0.1, budget 500).
  const double frozen = OQSLAB_SL_NECESSITY_FROZEN;
  bool pass = code == 0 && best <= -1e-4;
  if (frozen != 0.0) pass = pass && std::abs(best - frozen) <= 1e-9;

  int code0 = 0;
  const json rep0 = run_cli_report(
      "run sl-necessity --dim-s 2 --dim-b 2 --eps 0 --budget 500 --seed 7",
      &code0);
  const double best0 =
      rep0["metrics"]["bestMinChoiEigenvalue"].get<double>();
  pass = pass && code0 == 0 && best0 >= -1e-9;
  report(8, "discordant assignment admits a non-CP unitary; control stays CP",
         pass,
         "violation " + std::to_string(best) + ", control " +
             std::to_string(best0));
}

void criterion9_kraus_roundtrip() {
  Rng rng(9);
  std::vector<Superoperator> corpus;
  Superoperator id;
  id.dim = 2;
  id.mat = Mat::Identity(4, 4);
  corpus.push_back(id);
  Mat swap = Mat::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  corpus.push_back(folklore_map(random_density(2, rng), swap));
  for (int t = 0; t < 50; ++t)
    corpus.push_back(
        folklore_map(random_density(2, rng), haar_unitary(4, rng)));
  double worst = 0.0;
  for (const auto& l : corpus) {
    const auto kraus = kraus_from_choi(choi_of(l));
    worst = std::max(
        worst,
        (superop_from_kraus(kraus, l.dim).mat - l.mat).cwiseAbs().maxCoeff());
  }
  report(9, "choi -> kraus -> superoperator round-trip", worst <= 1e-9,
         "worst residual " + std::to_string(worst));
}

void criterion10_kernel_health() {
  Rng rng(10);
  double worst_eig = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Mat g = rng.ginibre(16, 16);
    const Mat h = 0.5 * (g + Mat(g.adjoint()));
    const EigResult r = herm_eig(h);
    for (int i = 0; i < 16; ++i)
      worst_eig = std::max(
          worst_eig, (h * r.eigenvectors.col(i) -
                      r.eigenvalues(i) * r.eigenvectors.col(i))
                             .norm() /
                         h.norm());
  }
  double worst_expand = 0.0;
  for (int ds : {2, 3})
    for (int db : {2, 3})
      for (int t = 0; t < 10; ++t) {
        const Mat g = rng.ginibre(ds * db, ds * db);
        const Mat h = 0.5 * (g + Mat(g.adjoint()));
        worst_expand = std::max(
            worst_expand,
            (resum_coeffs(expand_coeffs(h, ds, db), ds, db) - h).norm());
      }
  report(10, "kernel health: eigensolver residual and expansion round-trip",
         worst_eig <= 1e-11 && worst_expand <= 1e-10,
         "eig " + std::to_string(worst_eig) + ", expand " +
             std::to_string(worst_expand));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion1_folklore_cp();
  criterion2_transpose();
  criterion3_property1();
  criterion4_hadamard();
  criterion5_theorem2();
  criterion6_commuting_gap();
  criterion7_discord();
  criterion8_sl_necessity();
  criterion9_kraus_roundtrip();
  criterion10_kernel_health();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(11, "full suite wall clock under 120 s", elapsed < 120.0,
         std::to_string(elapsed) + " s");
  std::filesystem::remove_all(work_dir());
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
