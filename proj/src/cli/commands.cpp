#include "twotime/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "twotime/twotime.hpp"

namespace twotime::cli {

static_assert(RunConfig::kDefaultSeed == twotime::kDefaultSeed);

namespace {

constexpr double kPi = std::numbers::pi;

class Checklist {
 public:
  explicit Checklist(std::ostream& log) : log_(log) {}

  void at_most(std::string_view name, double measured, double limit) {
    record(name, measured <= limit, measured, "<=", limit);
  }

  void at_least(std::string_view name, double measured, double limit) {
    record(name, measured >= limit, measured, ">=", limit);
  }

  int status() const { return failures_ == 0 ? 0 : 1; }

 private:
  void record(std::string_view name, bool ok, double measured, const char* op, double limit) {
    log_ << (ok ? "PASS " : "FAIL ") << name << ": " << std::setprecision(12) << measured << ' '
         << op << ' ' << limit << '\n';
    if (!ok) ++failures_;
  }

  std::ostream& log_;
  int failures_ = 0;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Matrixd projector_down() {
  Matrixd alpha = Matrixd::Zero(2, 2);
  alpha(1, 1) = 1;
  return alpha;
}

int report_torque_bound(const RunConfig& cfg, std::ostream& log) {
  Checklist checks(log);
  const auto table = figure1_scan(default_radii(), cfg.samples, cfg.seed, worker_count());

  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& row : table.scatter)
    min_slack = std::min(min_slack, row.irr_spin + row.irr_torque - row.bound_rhs);
  checks.at_least("min slack of the irreality-sum bound over the scan", min_slack, -1e-9);

  const auto tight = torque_irreality_pair(BlochVectord::spherical(1.0, kPi / 2, 0.0));
  checks.at_most("|sum - bound| at r=1, theta=pi/2, phi=0", std::abs(tight.sum() - bound_rhs(1.0)),
                 1e-9);

  for (const auto& band : band_minima(table)) {
    std::ostringstream name;
    name << "r=" << band.r << " band minimum";
    checks.at_most(name.str() + " |theta - pi/2|", std::abs(band.theta - kPi / 2), 0.1);
    checks.at_most(name.str() + " distance above equatorial curve", band.sum - band.curve_sum,
                   0.02);
  }

  double max_dev = 0;
  std::mt19937_64 engine(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto v = BlochVectord::spherical(unif(engine), kPi * unif(engine), 2 * kPi * unif(engine));
    const auto a = torque_irreality_pair(v);
    const auto n = torque_irreality_pair_numeric(v);
    max_dev = std::max({max_dev, std::abs(a.irr_torque - n.irr_torque),
                        std::abs(a.irr_spin - n.irr_spin)});
  }
  checks.at_most("max |closed form - entropy pipeline| over 1000 states", max_dev, 1e-10);
  return checks.status();
}

int report_eigenprep(const RunConfig& cfg, std::ostream& log) {
  Checklist checks(log);
  std::mt19937_64 engine(cfg.seed);
  double worst = 0, worst_mixture = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = random_two_time_operator<double>(2 + i % 3, engine);
    const auto realized = realize(c);
    Matrixd mixture = Matrixd::Zero(realized.dim(), realized.dim());
    std::vector<double> weights(realized.spectrum().size());
    for (auto& w : weights) w = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    double total = 0;
    for (double w : weights) total += w;
    for (std::size_t k = 0; k < realized.spectrum().size(); ++k) {
      const auto rho = prepare_eigenstate(c, k);
      worst = std::max(worst, irreality(realized, rho).irreality);
      mixture += (weights[k] / total) * rho.matrix();
    }
    worst_mixture = std::max(worst_mixture,
                             irreality(realized, DensityMatrixd(hermitian_part(mixture))).irreality);
  }
  checks.at_most("max I(C12 | eigenstate) over 100 two-time operators", worst, 1e-10);
  checks.at_most("max I(C12 | eigenstate mixture) over 100 two-time operators", worst_mixture,
                 1e-10);

  const auto channel = spin_precession<double>(Vector3d::UnitZ());
  double max_dev = 0;
  std::uniform_real_distribution<double> tau(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double t1 = tau(engine), t2 = tau(engine);
    const TwoTimeOperatord c{TwoTimeKind::product, Observabled(Matrix2d(0.5 * pauli_x<double>())),
                             Observabled(Matrix2d(0.5 * pauli_y<double>())), t1, t2, channel};
    const Matrixd expected = 0.25 * std::sin(t2 - t1) * Matrixd::Identity(2, 2);
    max_dev = std::max(max_dev, max_norm(Matrixd(realize(c).matrix() - expected)));
  }
  checks.at_most("max ||1/2{S_x(t1),S_y(t2)} - sin(t2-t1)/4 * 1||", max_dev, 1e-10);
  return checks.status();
}

int report_displacement(const RunConfig& cfg, std::ostream& log) {
  Checklist checks(log);
  std::mt19937_64 engine(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double min_product = std::numeric_limits<double>::infinity();
  double min_sum = min_product;
  double max_closed_form = 0, max_consistency = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = random_gaussian_prep<double>(engine);
    const FreeParticle<double> fp(std::exp(3 * (unif(engine) - 0.5)));
    double t1 = 5 * unif(engine), t2 = 5 * unif(engine);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 == t1) t2 += 1e-3;
    const auto rep = uncertainty_report(g, fp, t1, t2);
    min_product = std::min(min_product, rep.product_slack);
    min_sum = std::min(min_sum, rep.sum_slack);
    const double closed = g.dp() * (t2 - t1) / fp.mass();
    max_closed_form =
        std::max(max_closed_form, std::abs(rep.displacement_spread - closed) / closed);
    const double var_diff = position_covariance(g, fp, t1, t1) + position_covariance(g, fp, t2, t2) -
                            2 * position_covariance(g, fp, t1, t2);
    max_consistency = std::max(max_consistency, std::abs(var_diff - closed * closed) /
                                                    std::max(1.0, closed * closed));
  }
  checks.at_least("min slack of dX1 dX2 >= dt/(2m)", min_product, -1e-12);
  checks.at_least("min slack of d_delta (dX1 + dX2) >= dt/m", min_sum, -1e-12);
  checks.at_most("max relative |d_delta - dp dt/m|", max_closed_form, 1e-14);
  checks.at_most("max relative |Var(X2 - X1) - d_delta^2|", max_consistency, 1e-10);
  return checks.status();
}

int report_precession(const RunConfig& cfg, std::ostream& log) {
  Checklist checks(log);
  std::mt19937_64 engine(cfg.seed);
  std::uniform_real_distribution<double> tau_dist(-2 * kPi, 2 * kPi);
  const auto sigma = pauli_vector<double>();
  double conj_dev = 0, ortho = 0, fd_dev = 0;
  for (int i = 0; i < 100; ++i) {
    const Vector3d h = random_unit_vector<double>(engine);
    const double tau = tau_dist(engine);
    const auto closed = pauli_heisenberg(PrecessionConfigd(h, tau));
    const Matrixd u = spin_precession(h).propagator(tau);
    for (int k = 0; k < 3; ++k)
      conj_dev = std::max(conj_dev, max_norm(Matrixd(u.adjoint() * sigma[k] * u - closed[k])));

    const auto torque = instantaneous_torque(PrecessionConfigd(h, tau));
    ortho = std::max(ortho, max_norm(dot(h, torque)));

    constexpr double step = 1e-5;
    const auto plus = pauli_heisenberg(PrecessionConfigd(h, tau + step));
    const auto minus = pauli_heisenberg(PrecessionConfigd(h, tau - step));
    for (int k = 0; k < 3; ++k)
      fd_dev = std::max(fd_dev, max_norm(Matrix2d((plus[k] - minus[k]) / (2 * step) - torque[k])));
  }
  checks.at_most("max |sigma(tau) - U^dagger sigma U| over 100 (h, tau)", conj_dev, 1e-12);
  checks.at_most("max |h . T_tau|", ortho, 1e-12);
  checks.at_most("max |T_tau - central difference of sigma(tau)|", fd_dev, 1e-8);
  return checks.status();
}

}  // namespace

TableFormat parse_format(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "tsv") return TableFormat::tsv;
  throw std::invalid_argument("unknown table format: " + std::string(name));
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("TWOTIME_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

std::vector<double> default_radii() { return {0.2, 0.5, 0.8, 1.0}; }

std::filesystem::path table_path(const RunConfig& cfg, std::string_view stem) {
  return cfg.out_dir /
         (std::string(stem) + (cfg.format == TableFormat::csv ? ".csv" : ".tsv"));
}

TableWriter::TableWriter(const std::filesystem::path& path, TableFormat format,
                         const std::vector<std::string>& header)
    : path_(path), sep_(format == TableFormat::csv ? ',' : '\t') {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? std::string(1, sep_) : "") << header[i];
  out_ << '\n';
  out_ << std::setprecision(12);
}

void TableWriter::row(std::initializer_list<Cell> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out_ << sep_;
    first = false;
    if (cell.is_text)
      out_ << cell.text;
    else
      out_ << cell.number;
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

int cmd_figure1(const RunConfig& cfg, const std::vector<double>& r_values, std::ostream& log) {
  if (cfg.samples < 1) throw std::invalid_argument("figure1: samples must be >= 1");
  const auto table = figure1_scan(r_values, cfg.samples, cfg.seed, worker_count());

  const Figure1Row<double>* offending = nullptr;
  for (const auto& row : table.scatter) {
    if (row.irr_spin + row.irr_torque < row.bound_rhs - 1e-9) {
      offending = &row;
      break;
    }
  }

  TableWriter scatter(table_path(cfg, "figure1_scatter"), cfg.format,
                      {"r", "theta", "phi", "irr_spin", "irr_torque"});
  for (const auto& row : table.scatter)
    scatter.row({row.r, row.theta, row.phi, row.irr_spin, row.irr_torque});
  TableWriter curves(table_path(cfg, "figure1_curves"), cfg.format,
                     {"r", "phi", "irr_spin", "irr_torque"});
  for (const auto& row : table.curves) curves.row({row.r, row.phi, row.irr_spin, row.irr_torque});

  log << "wrote " << table.scatter.size() << " scatter rows to " << scatter.path().string() << '\n'
      << "wrote " << table.curves.size() << " curve rows to " << curves.path().string() << '\n';
  for (const auto& band : band_minima(table)) {
    log << std::setprecision(12) << "r=" << band.r << ": min sum " << band.sum << " at theta "
        << band.theta << ", phi " << band.phi << "; bound " << band.bound << '\n';
  }
  if (offending != nullptr) {
    log << "FAIL bound violated at r=" << offending->r << " theta=" << offending->theta
        << " phi=" << offending->phi << " sum=" << offending->irr_spin + offending->irr_torque
        << " bound=" << offending->bound_rhs << '\n';
    return 1;
  }
  log << "PASS every row satisfies I(T^x) + I(sigma^x) >= ln 2 - H_bin((1+r)/2)\n";
  return 0;
}

int cmd_lambda(const RunConfig& cfg, std::size_t theta_steps, std::ostream& log) {
  if (theta_steps < 2) throw std::invalid_argument("lambda: theta-steps must be >= 2");
  const auto channel = spin_precession<double>(Vector3d::UnitY());
  const DensityMatrixd north = DensityMatrixd::pure(Eigen::Vector2cd(1, 0));
  const Matrixd alpha = projector_down();

  TableWriter table(table_path(cfg, "lambda"), cfg.format,
                    {"theta", "nu_norm", "min_eigenvalue", "physical"});
  std::size_t physical = 0;
  double max_dev = 0;
  bool physical_only_at_pi = true;
  for (std::size_t k = 1; k <= theta_steps; ++k) {
    const double theta = kPi * double(k) / double(theta_steps);
    const auto report = lambda_operator(alpha, north, theta, channel);
    const double nu_norm = pauli_components(report.lambda).norm();
    const double closed = 1.0 / std::abs(std::sin(theta / 2));
    max_dev = std::max(max_dev, std::abs(nu_norm - closed));
    if (report.physical) {
      ++physical;
      if (k != theta_steps) physical_only_at_pi = false;
    } else if (k == theta_steps) {
      physical_only_at_pi = false;
    }
    table.row({theta, nu_norm, report.min_eigenvalue, report.physical});
  }
  log << "wrote " << theta_steps << " rows to " << table.path().string() << '\n'
      << "physical fraction: " << physical << '/' << theta_steps << '\n';
  Checklist checks(log);
  checks.at_most("max |nu_norm - 1/|sin(theta/2)||", max_dev, 1e-10);
  checks.at_least("Lambda physical exactly at theta = pi", physical_only_at_pi ? 1.0 : 0.0, 1.0);
  return checks.status();
}

int cmd_tpm_gap(const RunConfig& cfg, int dim, std::size_t trials, std::ostream& log) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("tpm-gap: dim must be 2 or 3");
  Checklist checks(log);
  std::mt19937_64 engine(cfg.seed);

  double max_gap = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto channel = random_unitary_channel<double>(dim, engine);
    const auto rho0 = random_state<double>(dim, engine);
    const auto [t1, t2] = random_time_pair<double>(engine);
    const auto a = dim == 2 ? random_sign_observable<double>(engine)
                            : random_observable<double>(dim, engine);
    const auto b = dim == 2 ? random_sign_observable<double>(engine)
                            : random_observable<double>(dim, engine);
    const double tpm = tpm_correlator(a, b, t1, t2, channel, rho0);
    const double heis = heisenberg_correlator(TwoTimeOperatord{TwoTimeKind::product, a, b, t1, t2, channel}, rho0);
    max_gap = std::max(max_gap, std::abs(tpm - heis));
  }

  double max_real_gap = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto channel = random_unitary_channel<double>(dim, engine);
    const auto a = random_observable<double>(dim, engine);
    const auto b = random_observable<double>(dim, engine);
    const auto [t1, t2] = random_time_pair<double>(engine);
    const auto rho_t1 = dephase(a, random_state<double>(dim, engine));
    const DensityMatrixd rho0(hermitian_part(channel.heisenberg(rho_t1.matrix(), t1)));
    const double tpm = tpm_correlator(a, b, t1, t2, channel, rho0);
    const double heis = heisenberg_correlator(TwoTimeOperatord{TwoTimeKind::product, a, b, t1, t2, channel}, rho0);
    max_real_gap = std::max(max_real_gap, std::abs(tpm - heis));
  }

  log << "dim " << dim << ", " << trials << " trials\n";
  if (dim == 2) {
    checks.at_most("max |TPM - Heisenberg|, +-1 spectra", max_gap, 1e-10);
  } else {
    log << std::setprecision(12) << "max |TPM - Heisenberg| over random instances: " << max_gap
        << '\n';
    const auto fx = QutritGapFixture<double>::make();
    const double tpm = tpm_correlator(fx.a, fx.b, fx.t1, fx.t2, fx.channel, fx.rho0);
    const double heis = heisenberg_correlator(fx.product_operator(), fx.rho0);
    log << "fixture: TPM = " << tpm << ", Heisenberg = " << heis << '\n';
    checks.at_least("fixture |TPM - Heisenberg|", std::abs(tpm - heis), 1e-6);
  }
  checks.at_most("max |TPM - Heisenberg| when A is real at t1", max_real_gap, 1e-10);
  return checks.status();
}

int cmd_report(const RunConfig& cfg, std::string_view name, std::ostream& log) {
  if (name == "torque-bound") return report_torque_bound(cfg, log);
  if (name == "eigenprep") return report_eigenprep(cfg, log);
  if (name == "displacement") return report_displacement(cfg, log);
  if (name == "precession") return report_precession(cfg, log);
  throw std::invalid_argument("unknown report: " + std::string(name) +
                              " (expected torque-bound, eigenprep, displacement, precession)");
}

}  // namespace twotime::cli
