// larmor: spin-1/2 magnetic rotator scattering engine.
//
// Subcommands:
//   scan       one evaluation at a point in (B, beam, width, theta)
//   table      sweep one parameter, one CSV/JSON record per value
//   sweep      alias of table
//   packet     Gaussian wave-packet spin distributions, per-k tables
//   calibrate  invert the baseline precession formula for the width
//   selftest   run the built-in invariant suite
//
// Exit codes: 0 success, 2 input domain error, 3 evanescent channel without
// opt-in, 4 internal invariant violation / selftest failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "larmor/config.hpp"
#include "larmor/errors.hpp"
#include "larmor/precession.hpp"
#include "larmor/scattering.hpp"
#include "larmor/selftest.hpp"
#include "larmor/units.hpp"
#include "larmor/wavepacket.hpp"

namespace {

using larmor::Beam;
using larmor::ChannelAmplitudes;
using larmor::ChannelKind;
using larmor::EvanescentPolicy;
using larmor::FieldRegion;
using larmor::RuntimeConfig;

// 12 significant digits, scientific: round-trip safe and bit-stable.
std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

constexpr const char* kScanColumns =
    "param,v_mps,E_J,B_T,a_m,theta_rad,k,k1,k2,t2_up,t2_down,r2_up,r2_down,"
    "amp_a,amp_b,phi1,phi2,phi_std,p_std,p_mod_raw,p_mod_norm,mu_B_over_E";

struct ScanRecord {
  std::string param;
  double v_mps, E_J, B_T, a_m, theta_rad;
  double k, k1, k2;  // k1 is -kappa when the barrier channel is evanescent
  double t2_up, t2_down, r2_up, r2_down;
  double amp_a, amp_b, phi1, phi2;
  double phi_std, p_std, p_mod_raw, p_mod_norm;
  double mu_B_over_E;

  std::string csv() const {
    std::ostringstream out;
    out << param << ',' << sci(v_mps) << ',' << sci(E_J) << ',' << sci(B_T)
        << ',' << sci(a_m) << ',' << sci(theta_rad) << ',' << sci(k) << ','
        << sci(k1) << ',' << sci(k2) << ',' << sci(t2_up) << ',' << sci(t2_down)
        << ',' << sci(r2_up) << ',' << sci(r2_down) << ',' << sci(amp_a) << ','
        << sci(amp_b) << ',' << sci(phi1) << ',' << sci(phi2) << ','
        << sci(phi_std) << ',' << sci(p_std) << ',' << sci(p_mod_raw) << ','
        << sci(p_mod_norm) << ',' << sci(mu_B_over_E);
    return out.str();
  }

  nlohmann::ordered_json json() const {
    return nlohmann::ordered_json{{"param", param},
                                  {"v_mps", v_mps},
                                  {"E_J", E_J},
                                  {"B_T", B_T},
                                  {"a_m", a_m},
                                  {"theta_rad", theta_rad},
                                  {"k", k},
                                  {"k1", k1},
                                  {"k2", k2},
                                  {"t2_up", t2_up},
                                  {"t2_down", t2_down},
                                  {"r2_up", r2_up},
                                  {"r2_down", r2_down},
                                  {"amp_a", amp_a},
                                  {"amp_b", amp_b},
                                  {"phi1", phi1},
                                  {"phi2", phi2},
                                  {"phi_std", phi_std},
                                  {"p_std", p_std},
                                  {"p_mod_raw", p_mod_raw},
                                  {"p_mod_norm", p_mod_norm},
                                  {"mu_B_over_E", mu_B_over_E}};
  }
};

struct CommonOptions {
  std::string config_path;
  double B = 0.0;
  bool B_set = false;
  std::optional<double> v, E_eV, k;
  std::optional<double> width;
  double theta = 0.0;
  bool allow_evanescent = false;
  std::string format = "csv";
  std::string out_path;

  RuntimeConfig runtime;

  bool width_is_default() const { return !width.has_value(); }
  double width_value() const {
    return width.value_or(larmor::default_rotator_width);
  }
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_beam) {
  cmd->add_option("--config", opt.config_path,
                  "JSON config overriding particle constants (falls back to "
                  "the LARMOR_CONFIG environment variable)");
  cmd->add_option("--B", opt.B, "magnetic field strength [T]")
      ->check(CLI::NonNegativeNumber)
      ->each([&opt](const std::string&) { opt.B_set = true; });
  if (with_beam) {
    auto* v = cmd->add_option("--v", opt.v, "beam velocity [m/s]");
    auto* e = cmd->add_option("--E-eV", opt.E_eV, "beam kinetic energy [eV]");
    auto* k = cmd->add_option("--k", opt.k, "beam wavenumber [1/m]");
    v->excludes(e)->excludes(k);
    e->excludes(k);
  }
  cmd->add_option("--width", opt.width,
                  "rotator width a [m]; defaults to the calibrated reference "
                  "width");
  cmd->add_option("--theta", opt.theta, "analyzer angle [rad]");
  cmd->add_flag("--allow-evanescent", opt.allow_evanescent,
                "continue analytically through the closed barrier channel "
                "(k1 = i kappa)");
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out_path, "output path (default stdout)");
}

void resolve_runtime(CommonOptions& opt) {
  std::string path = opt.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("LARMOR_CONFIG")) path = env;
  }
  opt.runtime = path.empty() ? RuntimeConfig{} : larmor::load_config(path);
}

Beam resolve_beam(const CommonOptions& opt) {
  const int given = int(opt.v.has_value()) + int(opt.E_eV.has_value()) +
                    int(opt.k.has_value());
  if (given != 1)
    throw larmor::DomainError(
        "exactly one of --v, --E-eV, --k must be given (got " +
        std::to_string(given) + ")");
  const auto& c = opt.runtime.constants;
  const auto& particle = opt.runtime.particle;
  if (opt.v) return larmor::beam_from_velocity(particle, *opt.v, c);
  if (opt.E_eV)
    return larmor::beam_from_energy(particle, larmor::ev_to_joule(*opt.E_eV, c),
                                    c);
  return larmor::beam_from_wavenumber(particle, *opt.k, c);
}

ScanRecord evaluate_point(const CommonOptions& opt, const Beam& beam, double B,
                          double width, double theta_raw,
                          const std::string& param) {
  const auto& c = opt.runtime.constants;
  const auto& particle = opt.runtime.particle;
  const double theta = larmor::AnalyzerSetting(theta_raw).theta;
  const FieldRegion field{B, width};
  const EvanescentPolicy policy = opt.allow_evanescent
                                      ? EvanescentPolicy::AnalyticContinuation
                                      : EvanescentPolicy::Error;

  const ChannelAmplitudes well =
      larmor::scatter_channel(beam, particle, field, ChannelKind::Well, policy, c);
  const ChannelAmplitudes barrier = larmor::scatter_channel(
      beam, particle, field, ChannelKind::Barrier, policy, c);

  larmor::TransmittedSpinor spinor;
  spinor.amp_up = std::abs(well.t);
  spinor.amp_down = std::abs(barrier.t);
  spinor.phase_up = larmor::wrap_phase(std::arg(well.t));
  spinor.phase_down = larmor::wrap_phase(std::arg(barrier.t));

  const larmor::StandardPrecession standard =
      larmor::standard_phase(particle, field, beam, c);

  ScanRecord rec;
  rec.param = param;
  rec.v_mps = beam.v;
  rec.E_J = beam.E;
  rec.B_T = B;
  rec.a_m = width;
  rec.theta_rad = theta;
  rec.k = beam.k;
  rec.k1 = barrier.evanescent ? -barrier.kappa : barrier.channel_k;
  rec.k2 = well.channel_k;
  rec.t2_up = std::norm(well.t);
  rec.t2_down = std::norm(barrier.t);
  rec.r2_up = std::norm(well.r);
  rec.r2_down = std::norm(barrier.r);
  rec.amp_a = spinor.amp_up;
  rec.amp_b = spinor.amp_down;
  rec.phi1 = spinor.phase_up;
  rec.phi2 = spinor.phase_down;
  rec.phi_std = standard.phi;
  rec.p_std = larmor::detection_probability_standard(standard.phi, theta);
  rec.p_mod_raw = larmor::detection_probability_modified(spinor, theta, false);
  rec.p_mod_norm = larmor::detection_probability_modified(spinor, theta, true);
  rec.mu_B_over_E = particle.moment_magnitude() * B / beam.E;
  return rec;
}

std::vector<std::pair<std::string, std::string>> metadata(
    const CommonOptions& opt, const std::string& command) {
  const auto& p = opt.runtime.particle;
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("generator", "larmor 1.0.0");
  meta.emplace_back("command", command);
  meta.emplace_back("particle.label", p.label);
  meta.emplace_back("particle.mass_kg", sci(p.mass));
  meta.emplace_back("particle.moment_J_per_T", sci(p.magnetic_moment));
  meta.emplace_back("hbar_J_s", sci(opt.runtime.constants.hbar));
  meta.emplace_back("B_T", sci(opt.B));
  meta.emplace_back("width_m", sci(opt.width_value()));
  meta.emplace_back("width_source",
                    opt.width_is_default() ? "default-calibrated" : "user");
  if (opt.width_is_default())
    meta.emplace_back("width_note",
                      "default width is calibrated against reference "
                      "detection-probability anchors, not a measured input");
  meta.emplace_back("theta_rad", sci(opt.theta));
  meta.emplace_back("allow_evanescent", opt.allow_evanescent ? "true" : "false");
  return meta;
}

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_)
        throw larmor::DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_records(const CommonOptions& opt, const std::string& command,
                   const std::vector<ScanRecord>& records,
                   const std::string& abort_note) {
  OutputTarget target(opt.out_path);
  std::ostream& os = target.stream();
  const auto meta = metadata(opt, command);
  if (opt.format == "json") {
    nlohmann::ordered_json doc;
    for (const auto& [key, value] : meta) doc["meta"][key] = value;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& rec : records) doc["rows"].push_back(rec.json());
    if (!abort_note.empty()) doc["aborted"] = abort_note;
    os << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : meta)
    os << "# " << key << " = " << value << '\n';
  os << kScanColumns << '\n';
  for (const auto& rec : records) os << rec.csv() << '\n';
  if (!abort_note.empty()) os << "# aborted: " << abort_note << '\n';
}

// Companion plotting script; data stays the contract, this is convenience.
void write_table_gnuplot(const std::string& csv_path,
                         const std::string& param) {
  static const std::map<std::string, int> xcol{
      {"v", 2}, {"B", 4}, {"a", 5}, {"theta", 6}};
  const auto it = xcol.find(param);
  if (it == xcol.end()) return;
  std::ofstream gp(csv_path + ".gp");
  if (!gp) return;
  gp << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key left\n";
  if (param != "theta") gp << "set logscale x\n";
  gp << "set xlabel '" << param << "'\n"
     << "set ylabel 'detection probability'\n"
     << "plot '" << csv_path << "' using " << it->second
     << ":19 with linespoints title 'standard', \\\n"
     << "     '" << csv_path << "' using " << it->second
     << ":20 with linespoints title 'modified'\n";
}

struct SweepSpec {
  std::string param;  // v | B | a | theta
  std::vector<double> values;
};

std::vector<double> parse_values_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw larmor::DomainError("--values entry '" + item + "' is not a number");
    }
    if (used != item.size())
      throw larmor::DomainError("--values entry '" + item + "' is not a number");
    values.push_back(value);
  }
  if (values.empty()) throw larmor::DomainError("--values list is empty");
  return values;
}

std::vector<double> parse_range(const std::string& text) {
  // lo:hi:n[:log]
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4)
    throw larmor::DomainError("--range must be lo:hi:n or lo:hi:n:log (got '" +
                              text + "')");
  double lo = 0.0, hi = 0.0;
  long n = 0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw larmor::DomainError("--range has non-numeric fields (got '" + text +
                              "')");
  }
  const bool log_spaced = parts.size() == 4;
  if (log_spaced && parts[3] != "log")
    throw larmor::DomainError("--range suffix must be 'log' (got '" + parts[3] +
                              "')");
  if (n < 1) throw larmor::DomainError("--range needs n >= 1");
  if (n > 1 && !(hi > lo || hi < lo))
    throw larmor::DomainError("--range must be strictly monotone");
  if (log_spaced && (lo <= 0.0 || hi <= 0.0))
    throw larmor::DomainError("--range log spacing needs positive endpoints");
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n));
  if (n == 1) {
    values.push_back(lo);
    return values;
  }
  for (long i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    values.push_back(log_spaced
                         ? std::exp(std::log(lo) + s * (std::log(hi / lo)))
                         : lo + s * (hi - lo));
  }
  return values;
}

int run_scan(CommonOptions& opt) {
  resolve_runtime(opt);
  if (!opt.B_set) throw larmor::DomainError("--B is required");
  const Beam beam = resolve_beam(opt);
  const ScanRecord rec = evaluate_point(opt, beam, opt.B, opt.width_value(),
                                        opt.theta, "scan");
  write_records(opt, "scan", {rec}, "");
  return 0;
}

int run_table(CommonOptions& opt, const SweepSpec& sweep) {
  resolve_runtime(opt);
  if (sweep.param != "v" && sweep.param != "B" && sweep.param != "a" &&
      sweep.param != "theta")
    throw larmor::DomainError("--param must be one of v, B, a, theta (got '" +
                              sweep.param + "')");
  if (sweep.param != "B" && !opt.B_set)
    throw larmor::DomainError("--B is required");

  std::optional<Beam> base_beam;
  if (sweep.param == "v") {
    if (opt.v || opt.E_eV || opt.k)
      throw larmor::DomainError(
          "--param v sweeps the beam; do not also give --v/--E-eV/--k");
  } else {
    base_beam = resolve_beam(opt);
  }

  std::vector<ScanRecord> records;
  std::string abort_note;
  int abort_code = 0;
  for (const double value : sweep.values) {
    try {
      const Beam beam =
          sweep.param == "v"
              ? larmor::beam_from_velocity(opt.runtime.particle, value,
                                           opt.runtime.constants)
              : *base_beam;
      const double B = sweep.param == "B" ? value : opt.B;
      const double width = sweep.param == "a" ? value : opt.width_value();
      const double theta = sweep.param == "theta" ? value : opt.theta;
      records.push_back(
          evaluate_point(opt, beam, B, width, theta, sweep.param));
    } catch (const larmor::EvanescentError& err) {
      abort_note = sweep.param + " = " + sci(value) + ": " + err.what();
      abort_code = 3;
      break;
    } catch (const larmor::DomainError& err) {
      abort_note = sweep.param + " = " + sci(value) + ": " + err.what();
      abort_code = 2;
      break;
    }
  }
  write_records(opt, "table", records, abort_note);
  if (!opt.out_path.empty() && opt.format == "csv")
    write_table_gnuplot(opt.out_path, sweep.param);
  if (abort_code != 0) {
    std::cerr << "error: table aborted after " << records.size()
              << " row(s): " << abort_note << '\n';
    return abort_code;
  }
  return 0;
}

struct PacketOptions {
  double sigma_rel = 0.05;
  double x0 = 0.0;
  int points = 2001;
  bool truncate = false;
  bool normalized = false;
  std::string param;  // "", "B" or "v"
};

void write_packet_table(const std::string& path, const CommonOptions& opt,
                        double B, double v0, const larmor::SpinDensityTable& table) {
  std::ofstream os(path);
  if (!os) throw larmor::DomainError("cannot open output file '" + path + "'");
  for (const auto& [key, value] : metadata(opt, "packet"))
    os << "# " << key << " = " << value << '\n';
  os << "# packet.B_T = " << sci(B) << '\n';
  os << "# packet.v0_mps = " << sci(v0) << '\n';
  os << "# truncated = " << (table.truncated ? "true" : "false") << '\n';
  if (table.truncated)
    os << "# k_cutoff = " << sci(table.k_cutoff) << '\n';
  os << "k,g2,p_std,p_mod_raw,p_mod_norm,density_std,density_mod\n";
  for (const auto& row : table.rows)
    os << sci(row.k) << ',' << sci(row.g2) << ',' << sci(row.p_std) << ','
       << sci(row.p_mod_raw) << ',' << sci(row.p_mod_norm) << ','
       << sci(row.density_std) << ',' << sci(row.density_mod) << '\n';
}

int run_packet(CommonOptions& opt, PacketOptions& popt,
               const std::string& values_text, const std::string& range_text) {
  resolve_runtime(opt);
  if (opt.format != "csv")
    throw larmor::DomainError(
        "packet emits CSV density tables; --format json is not supported here");
  if (!opt.B_set && popt.param != "B")
    throw larmor::DomainError("--B is required");
  if (!popt.param.empty() && popt.param != "B" && popt.param != "v")
    throw larmor::DomainError("packet --param must be B or v (got '" +
                              popt.param + "')");
  std::vector<double> sweep_values;
  if (!popt.param.empty()) {
    if (!values_text.empty())
      sweep_values = parse_values_list(values_text);
    else if (!range_text.empty())
      sweep_values = parse_range(range_text);
    else
      throw larmor::DomainError("packet --param needs --values or --range");
  }

  const std::string prefix = opt.out_path.empty() ? "packet" : opt.out_path;
  const auto& particle = opt.runtime.particle;
  const auto& c = opt.runtime.constants;

  struct SummaryRow {
    std::string param;
    double value, norm_g2, p_int_std, p_int_mod, err_std, err_mod, l2, linf;
    std::string file;
  };
  std::vector<SummaryRow> summary;

  if (popt.param == "v" && (opt.v || opt.E_eV || opt.k))
    throw larmor::DomainError(
        "--param v sweeps the beam; do not also give --v/--E-eV/--k");

  const int n_runs = sweep_values.empty() ? 1 : int(sweep_values.size());
  for (int i = 0; i < n_runs; ++i) {
    double B = opt.B;
    Beam beam{};
    if (popt.param == "v") {
      beam = larmor::beam_from_velocity(particle, sweep_values[size_t(i)], c);
    } else {
      if (popt.param == "B") B = sweep_values[size_t(i)];
      beam = resolve_beam(opt);
    }

    const larmor::GaussianPacket packet =
        larmor::packet_from_relative_width(beam.k, popt.sigma_rel, popt.x0);
    const larmor::KGrid grid = larmor::default_grid(packet, popt.points);
    const FieldRegion field{B, opt.width_value()};
    const auto policy = popt.truncate ? larmor::EvanescentGridPolicy::Truncate
                                      : larmor::EvanescentGridPolicy::Fail;
    larmor::SpinDensityTable table;
    if (opt.allow_evanescent && !popt.truncate) {
      // per-k analytic continuation across any closed-barrier region
      table.grid = grid;
      table.rows.resize(size_t(grid.n_points));
      for (int j = 0; j < grid.n_points; ++j) {
        const double k = grid.at(j);
        const Beam kb = larmor::beam_from_wavenumber(particle, k, c);
        const auto well = larmor::scatter_channel(
            kb, particle, field, ChannelKind::Well,
            EvanescentPolicy::AnalyticContinuation, c);
        const auto barrier = larmor::scatter_channel(
            kb, particle, field, ChannelKind::Barrier,
            EvanescentPolicy::AnalyticContinuation, c);
        auto& row = table.rows[size_t(j)];
        row.k = k;
        row.g2 = larmor::spectral_density(packet, k);
        row.p_std = larmor::spin_x_density_standard(packet, particle, field, k,
                                                    c) /
                    row.g2;
        row.p_mod_raw = 0.25 * std::norm(well.t + barrier.t);
        row.p_mod_norm =
            row.p_mod_raw / (0.5 * (std::norm(well.t) + std::norm(barrier.t)));
        row.density_std = row.g2 * row.p_std;
        row.density_mod = row.g2 * row.p_mod_raw;
      }
    } else {
      table = larmor::build_density_table(packet, particle, field, grid, policy,
                                          0, c);
      if (table.truncated)
        std::cerr << "warning: grid truncated to propagating k > "
                  << sci(table.k_cutoff) << " 1/m\n";
    }

    if (popt.normalized)
      for (auto& row : table.rows) row.density_mod = row.g2 * row.p_mod_norm;

    const size_t n = table.rows.size();
    std::vector<double> g2(n), dstd(n), dmod(n);
    for (size_t j = 0; j < n; ++j) {
      g2[j] = table.rows[j].g2;
      dstd[j] = table.rows[j].density_std;
      dmod[j] = table.rows[j].density_mod;
    }
    const auto norm = larmor::integrate_density(table.grid, g2);
    const auto int_std = larmor::integrate_density(table.grid, dstd);
    const auto int_mod = larmor::integrate_density(table.grid, dmod);
    const double l2 = larmor::l2_distance(table.grid, dstd, dmod);
    double linf = 0.0;
    for (size_t j = 0; j < n; ++j)
      linf = std::max(linf, std::fabs(dstd[j] - dmod[j]));

    std::string file = prefix;
    if (!sweep_values.empty()) file += "_" + std::to_string(i);
    file += ".csv";
    write_packet_table(file, opt, B, beam.v, table);

    summary.push_back({popt.param.empty() ? "none" : popt.param,
                       sweep_values.empty() ? B : sweep_values[size_t(i)],
                       norm.value, int_std.value, int_mod.value,
                       int_std.error_estimate, int_mod.error_estimate, l2, linf,
                       file});
  }

  const std::string summary_path = prefix + "_summary.csv";
  {
    std::ofstream os(summary_path);
    if (!os)
      throw larmor::DomainError("cannot open output file '" + summary_path +
                                "'");
    for (const auto& [key, value] : metadata(opt, "packet"))
      os << "# " << key << " = " << value << '\n';
    os << "# sigma_rel = " << sci(popt.sigma_rel) << '\n';
    os << "# n_points = " << popt.points << '\n';
    os << "param,value,norm_g2,p_int_std,p_int_mod,quad_err_std,quad_err_mod,"
          "l2_dist,linf_dist,file\n";
    for (const auto& row : summary)
      os << row.param << ',' << sci(row.value) << ',' << sci(row.norm_g2) << ','
         << sci(row.p_int_std) << ',' << sci(row.p_int_mod) << ','
         << sci(row.err_std) << ',' << sci(row.err_mod) << ',' << sci(row.l2)
         << ',' << sci(row.linf) << ',' << row.file << '\n';
  }

  {  // companion plot script for the per-k density files
    std::ofstream gp(prefix + ".gp");
    if (gp) {
      gp << "set datafile separator ','\n"
         << "set datafile commentschars '#'\n"
         << "set xlabel 'k [1/m]'\n"
         << "set ylabel 'spin density [m]'\n"
         << "plot \\\n";
      for (size_t i = 0; i < summary.size(); ++i)
        gp << "  '" << summary[i].file
           << "' using 1:6 with lines title 'standard " << summary[i].param
           << "=" << sci(summary[i].value) << "', \\\n"
           << "  '" << summary[i].file
           << "' using 1:7 with lines title 'modified " << summary[i].param
           << "=" << sci(summary[i].value) << "'"
           << (i + 1 < summary.size() ? ", \\\n" : "\n");
    }
  }

  std::cout << "wrote " << summary.size() << " density table(s) and "
            << summary_path << '\n';
  return 0;
}

int run_calibrate(CommonOptions& opt, double target_p, unsigned branch) {
  resolve_runtime(opt);
  if (!opt.B_set) throw larmor::DomainError("--B is required");
  if (!opt.v.has_value())
    throw larmor::DomainError("calibrate needs --v (the anchor beam velocity)");
  const double a =
      larmor::calibrate_width(opt.runtime.particle, opt.B, *opt.v, opt.theta,
                              target_p, branch, opt.runtime.constants);
  const double phi = 2.0 * opt.runtime.particle.moment_magnitude() * opt.B * a /
                     (opt.runtime.constants.hbar * *opt.v);
  OutputTarget target(opt.out_path);
  std::ostream& os = target.stream();
  if (!opt.out_path.empty())
    for (const auto& [key, value] : metadata(opt, "calibrate"))
      os << "# " << key << " = " << value << '\n';
  os << "a_m = " << sci(a) << '\n' << "phi_rad = " << sci(phi) << '\n';
  return 0;
}

int run_selftest() {
  const auto report = larmor::run_selftest();
  bool all_ok = true;
  for (const auto& check : report) {
    std::cout << (check.passed ? "[ ok ] " : "[FAIL] ") << check.name << " — "
              << check.detail << '\n';
    all_ok = all_ok && check.passed;
  }
  std::cout << (all_ok ? "selftest passed" : "selftest FAILED") << '\n';
  return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-1/2 magnetic rotator: exact transmitted-spin engine"};
  app.require_subcommand(1);

  CommonOptions scan_opt, table_opt, packet_opt_common, cal_opt;
  SweepSpec sweep;
  std::string table_values, table_range;
  PacketOptions popt;
  std::string packet_values, packet_range;
  double target_p = 0.0;
  unsigned branch = 0;

  CLI::App* scan = app.add_subcommand("scan", "single-point evaluation");
  add_common_flags(scan, scan_opt, true);

  CLI::App* table =
      app.add_subcommand("table", "sweep one parameter, one record per value");
  add_common_flags(table, table_opt, true);
  table->add_option("--param", sweep.param, "swept parameter: v | B | a | theta")
      ->required();
  table->add_option("--values", table_values, "comma-separated sweep values");
  table->add_option("--range", table_range, "sweep range lo:hi:n[:log]");

  CLI::App* sweep_alias = app.add_subcommand("sweep", "alias of table");
  add_common_flags(sweep_alias, table_opt, true);
  sweep_alias
      ->add_option("--param", sweep.param, "swept parameter: v | B | a | theta")
      ->required();
  sweep_alias->add_option("--values", table_values,
                          "comma-separated sweep values");
  sweep_alias->add_option("--range", table_range, "sweep range lo:hi:n[:log]");

  CLI::App* packet = app.add_subcommand(
      "packet", "Gaussian wave-packet spin distribution tables");
  add_common_flags(packet, packet_opt_common, true);
  packet->add_option("--sigma-rel", popt.sigma_rel,
                     "relative spectral width sigma_k/k0");
  packet->add_option("--x0", popt.x0, "initial packet peak position [m]");
  packet->add_option("--points", popt.points,
                     "k-grid size (odd), default 2001");
  packet->add_flag("--truncate-evanescent", popt.truncate,
                   "clip the grid to propagating k instead of failing");
  packet->add_flag("--normalized", popt.normalized,
                   "use the normalized per-k probability for density_mod");
  packet->add_option("--param", popt.param, "swept parameter: B | v");
  packet->add_option("--values", packet_values, "comma-separated sweep values");
  packet->add_option("--range", packet_range, "sweep range lo:hi:n[:log]");

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "invert cos^2((theta - phi(a))/2) = p for the width a");
  add_common_flags(calibrate, cal_opt, true);
  calibrate->add_option("--target-p", target_p, "target probability in [0, 1]")
      ->required();
  calibrate->add_option("--branch", branch,
                        "solution branch, 0 = smallest positive width");

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);  // --help
    app.exit(err);
    return 2;
  }

  try {
    if (scan->parsed()) return run_scan(scan_opt);
    if (table->parsed() || sweep_alias->parsed()) {
      if (!table_values.empty())
        sweep.values = parse_values_list(table_values);
      else if (!table_range.empty())
        sweep.values = parse_range(table_range);
      else
        throw larmor::DomainError("table needs --values or --range");
      return run_table(table_opt, sweep);
    }
    if (packet->parsed())
      return run_packet(packet_opt_common, popt, packet_values, packet_range);
    if (calibrate->parsed()) return run_calibrate(cal_opt, target_p, branch);
    if (selftest->parsed()) return run_selftest();
  } catch (const larmor::EvanescentError& err) {
    std::cerr << "error: " << err.what() << '\n'
              << "hint: pass --allow-evanescent to continue analytically\n";
    return 3;
  } catch (const larmor::DomainError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 4;
  }
  return 0;
}
