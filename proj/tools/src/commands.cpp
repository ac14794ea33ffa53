#include "qpurify/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "qpurify/analytics.hpp"
#include "qpurify/blocks.hpp"
#include "qpurify/cloning.hpp"
#include "qpurify/format.hpp"
#include "qpurify/oracle.hpp"
#include "qpurify/protocol.hpp"

namespace qpurify::cli {

namespace {

constexpr double kDefaultFigureLambdas[] = {0.2, 0.4, 0.6, 0.8, 1.0};
constexpr int kCovarianceSamples = 5;

std::string fmt(double x) { return format_double(x); }

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find(',', begin), text.size());
    const char* first = text.data() + begin;
    const char* last = text.data() + end;
    double x = 0.0;
    const auto res = std::from_chars(first, last, x);
    if (first == last || res.ec != std::errc() || res.ptr != last || !std::isfinite(x)) {
      throw UsageError("invalid " + what + " entry '" + std::string(first, last) + "'");
    }
    values.push_back(x);
    begin = end + 1;
  }
  return values;
}

// Writes to --out when given, else to `out`.
template <typename Fn>
int with_output(const RunConfig& config, std::ostream& out, Fn&& fn) {
  if (config.out_path.empty()) return fn(out);
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + config.out_path + "'");
  const int code = fn(file);
  if (!file) throw std::runtime_error("write to '" + config.out_path + "' failed");
  return code;
}

int require_n(const RunConfig& config) {
  if (!config.n) throw UsageError("--n is required");
  const int n = *config.n;
  if (n <= 0 || n % 2 != 0) throw UsageError("N must be even (got " + std::to_string(n) + ")");
  return n;
}

double single_lambda(const RunConfig& config) {
  if (config.lambdas.size() != 1) throw UsageError("this command takes exactly one --lambda value");
  return config.lambdas.front();
}

void require_within_cap(int n, const RunConfig& config) {
  if (n > config.qubit_cap) {
    throw UsageError("N=" + std::to_string(n) + " exceeds the dense qubit cap " +
                     std::to_string(config.qubit_cap) + " (raise it with SCHUR_CAP)");
  }
}

std::string label_text(BlockLabel label) {
  return "j=" + std::to_string(label.j) + " alpha=" + std::to_string(label.alpha);
}

struct Row {
  const char* check;
  std::string label;
  double residual;
};

// Linear map from data coordinates to SVG coordinates.
struct Axis {
  double lo, hi, pixel_lo, pixel_hi;
  double operator()(double x) const { return pixel_lo + (x - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

void write_figure_svg(const std::string& path, const RunConfig& config,
                      const std::vector<std::vector<double>>& curves) {
  std::ofstream svg(path, std::ios::binary);
  if (!svg) throw UsageError("cannot open plot file '" + path + "'");
  const int n_max = *config.n;
  const double width = 640, height = 420;
  const Axis x{static_cast<double>(config.n_min), static_cast<double>(std::max(n_max, config.n_min + 1)),
               60, width - 110};
  const Axis y{0.0, 1.0, height - 50, 20};
  static const char* colors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};

  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << x.pixel_lo << "\" y1=\"" << y.pixel_lo << "\" x2=\"" << x.pixel_hi
      << "\" y2=\"" << y.pixel_lo << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << x.pixel_lo << "\" y1=\"" << y.pixel_lo << "\" x2=\"" << x.pixel_lo
      << "\" y2=\"" << y.pixel_hi << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = k / 5.0;
    svg << "<text x=\"" << x.pixel_lo - 8 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">"
        << fmt(v) << "</text>\n";
  }
  const int step = std::max(2, (n_max - config.n_min) / 10 / 2 * 2);
  for (int n = config.n_min; n <= n_max; n += step) {
    svg << "<text x=\"" << x(n) << "\" y=\"" << y.pixel_lo + 18 << "\" text-anchor=\"middle\">" << n
        << "</text>\n";
  }
  svg << "<text x=\"" << (x.pixel_lo + x.pixel_hi) / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\">N</text>\n";
  svg << "<text x=\"16\" y=\"" << (y.pixel_lo + y.pixel_hi) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (y.pixel_lo + y.pixel_hi) / 2
      << ")\">lambda_mix(N, inf)</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = colors[c % std::size(colors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curves[c].size(); ++i) {
      svg << (i ? " " : "") << x(config.n_min + 2.0 * i) << "," << y(curves[c][i]);
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << x.pixel_hi + 8 << "\" y=\"" << y(curves[c].back()) + 4 << "\" fill=\""
        << color << "\">lambda=" << fmt(config.lambdas[c]) << "</text>\n";
  }
  svg << "</svg>\n";
}

}  // namespace

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> values = parse_number_list(text, "lambda");
  for (double v : values) {
    if (v < 0.0 || v > 1.0) throw UsageError("lambda must lie in [0, 1] (got " + fmt(v) + ")");
  }
  return values;
}

int parse_qubit_cap(const char* value) {
  if (value == nullptr || *value == '\0') return kDefaultQubitCap;
  const std::string text(value);
  int cap = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), cap);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || cap < 2 || cap > 24) {
    throw UsageError("SCHUR_CAP must be an integer in [2, 24] (got '" + text + "')");
  }
  return cap;
}

int cmd_stats(const RunConfig& config, std::ostream& out) {
  const int n = require_n(config);
  const double lambda = single_lambda(config);
  const char sep = config.separator();
  const BlockSpectrum spectrum = block_spectrum(n, lambda);
  return with_output(config, out, [&](std::ostream& os) {
    os << "j" << sep << "d_j" << sep << "p_j" << sep << "f_j\n";
    for (const auto& row : spectrum.rows) {
      os << row.j << sep << row.multiplicity << sep << fmt(row.probability) << sep
         << fmt(row.fidelity) << '\n';
    }
    os << "yield=" << fmt(yield(n, lambda)) << '\n';
    os << "mean_fidelity=" << fmt(mean_fidelity(n, lambda)) << '\n';
    return kExitSuccess;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const int n = require_n(config);
  const double lambda = single_lambda(config);
  require_within_cap(n, config);
  if (!(config.tol > 0.0)) throw UsageError("--tol must be positive");
  const MixedQubit q(lambda, config.direction);
  const SchurBasis basis = build_schur_basis(n, config.qubit_cap);

  std::vector<Row> rows;
  const DecompositionReport report = verify_decomposition(q, basis, config.tol);
  rows.push_back({"reconstruction", "all", report.reconstruction_residual});
  rows.push_back({"excitation_sum", "all", report.excitation_residual});
  for (const auto& [label, r] : report.probability_residuals) rows.push_back({"probability", label_text(label), r});
  for (const auto& [label, r] : report.post_measurement_residuals) {
    rows.push_back({"post_state", label_text(label), r});
  }
  for (const auto& [label, r] : report.fidelity_residuals) rows.push_back({"fidelity", label_text(label), r});
  for (int j = 1; j <= n / 2; ++j) {
    rows.push_back({"quadrature", "j=" + std::to_string(j),
                    quadrature_check(q, j, 2 * j + 1, 0, config.qubit_cap)});
  }
  for (const auto& [label, r] : reversibility_check_all(q, basis)) {
    rows.push_back({"reversibility", label_text(label), r});
  }
  std::mt19937_64 rng(config.seed);
  const Procedure protocol = purification_procedure(basis);
  for (int s = 1; s <= kCovarianceSamples; ++s) {
    rows.push_back({"covariance", "sample=" + std::to_string(s),
                    covariance_residual(protocol, q, n, haar_unitary(rng), config.qubit_cap)});
  }

  const char sep = config.separator();
  bool passed = true;
  return with_output(config, out, [&](std::ostream& os) {
    os << "check" << sep << "label" << sep << "residual" << sep << "status\n";
    for (const auto& row : rows) {
      const bool ok = row.residual < config.tol;
      passed = passed && ok;
      os << row.check << sep << row.label << sep << fmt(row.residual) << sep << (ok ? "ok" : "FAIL")
         << '\n';
    }
    return passed ? kExitSuccess : kExitFailure;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const int n = require_n(config);
  const double lambda = single_lambda(config);
  if (config.trials < 1) throw UsageError("--trials must be >= 1");
  const MixedQubit q(lambda, config.direction);

  std::vector<OutcomeRecord> trace;
  ProtocolOptions options;
  options.workers = config.workers;
  if (!config.out_path.empty()) options.trace = &trace;
  SimulationSummary summary;
  if (config.dense) {
    require_within_cap(n, config);
    const SchurBasis basis = build_schur_basis(n, config.qubit_cap);
    summary = run_protocol_dense(q, basis, config.trials, config.seed, options);
  } else {
    summary = run_protocol(q, n, config.trials, config.seed, options);
  }

  const char sep = config.separator();
  bool passed = true;
  auto emit = [&](const char* name, const Estimate& e, double target) {
    const double diff = e.mean - target;
    double z = 0.0;
    if (e.std_error > 0.0) {
      z = diff / e.std_error;
    } else if (std::abs(diff) > 1e-12) {
      z = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    passed = passed && std::abs(z) < 4.0;
    out << name << sep << fmt(e.mean) << sep << fmt(e.std_error) << sep << fmt(target) << sep
        << fmt(z) << '\n';
  };
  out << "quantity" << sep << "empirical" << sep << "std_error" << sep << "closed_form" << sep
      << "z_score\n";
  emit("yield", summary.yield, yield(n, lambda));
  emit("mean_fidelity", summary.mean_fidelity, mean_fidelity(n, lambda));
  out << '\n';
  out << "j" << sep << "count" << sep << "p_j\n";
  for (std::size_t j = 0; j < summary.histogram.size(); ++j) {
    out << j << sep << summary.histogram[j] << sep
        << fmt(block_probability(n, lambda, static_cast<int>(j))) << '\n';
  }

  if (!config.out_path.empty()) {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + config.out_path + "'");
    write_trials_csv(file, trace, sep);
  }
  return passed ? kExitSuccess : kExitFailure;
}

int cmd_figure1(const RunConfig& config, std::ostream& out) {
  RunConfig c = config;
  if (!c.n) c.n = 40;
  const int n_max = require_n(c);
  if (c.n_min < 2 || c.n_min % 2 != 0) throw UsageError("--n-min must be even and >= 2");
  if (n_max < c.n_min) throw UsageError("--n must be >= --n-min");
  if (c.lambdas.empty()) c.lambdas.assign(std::begin(kDefaultFigureLambdas), std::end(kDefaultFigureLambdas));
  std::sort(c.lambdas.begin(), c.lambdas.end());
  c.lambdas.erase(std::unique(c.lambdas.begin(), c.lambdas.end()), c.lambdas.end());

  std::vector<std::vector<double>> curves;
  for (double lambda : c.lambdas) {
    auto& curve = curves.emplace_back();
    for (int n = c.n_min; n <= n_max; n += 2) curve.push_back(estimation_lambda(n, lambda));
  }
  if (!c.plot_path.empty()) write_figure_svg(c.plot_path, c, curves);

  const char sep = c.separator();
  return with_output(c, out, [&](std::ostream& os) {
    os << "N" << sep << "lambda" << sep << "lambda_mix_inf\n";
    for (std::size_t k = 0; k < c.lambdas.size(); ++k) {
      for (std::size_t i = 0; i < curves[k].size(); ++i) {
        os << c.n_min + 2 * static_cast<int>(i) << sep << fmt(c.lambdas[k]) << sep << fmt(curves[k][i])
           << '\n';
      }
    }
    return kExitSuccess;
  });
}

int cmd_clone(const RunConfig& config, std::ostream& out) {
  const int n = require_n(config);
  const double lambda = single_lambda(config);
  if (!config.m && !config.m_infinite) throw UsageError("--m is required (an integer or 'inf')");
  const CloneSettings settings{n, config.m_infinite ? std::nullopt : config.m, lambda};
  try {
    settings.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const char sep = config.separator();
  return with_output(config, out, [&](std::ostream& os) {
    os << "quantity" << sep << "value\n";
    os << "N" << sep << n << '\n';
    os << "M" << sep << (settings.m_out ? std::to_string(*settings.m_out) : "inf") << '\n';
    os << "lambda" << sep << fmt(lambda) << '\n';
    os << "F_mix" << sep << fmt(mixed_cloning_fidelity(settings)) << '\n';
    os << "lambda_mix" << sep << fmt(mixed_cloning_lambda(settings)) << '\n';
    if (settings.m_out) os << "scaling_residual" << sep << fmt(scaling_relation_check(settings)) << '\n';
    os << '\n';
    os << "j" << sep << "p_j" << sep << "f_j" << sep << "F_pur" << sep << "contribution\n";
    for (int j = 0; j <= n / 2; ++j) {
      const double p = block_probability(n, lambda, j);
      const double f = block_fidelity(lambda, j);
      const double clone = pure_cloning_fidelity(j, settings.m_out);
      const double term = j == 0 ? 0.5 * p : p * (clone * f + (1 - clone) * (1 - f));
      os << j << sep << fmt(p) << sep << fmt(f) << sep << fmt(clone) << sep << fmt(term) << '\n';
    }
    return kExitSuccess;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal purification and cloning of mixed qubits", "qpurify"};
  app.require_subcommand(1, 1);

  RunConfig config;
  int n = 0;
  std::string lambda_text;
  std::string m_text;
  std::string direction_text;
  std::string format_text = "csv";

  auto add_n = [&](CLI::App* cmd, const char* help) { return cmd->add_option("--n", n, help); };
  auto add_lambda = [&](CLI::App* cmd) {
    return cmd->add_option("--lambda", lambda_text, "Bloch-vector length, or a comma list");
  };
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", config.out_path, "Write the table to this file");
    cmd->add_option("--format", format_text, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
  };

  CLI::App* stats = app.add_subcommand("stats", "Block spectrum, yield and mean fidelity");
  add_n(stats, "Number of input copies (even)")->required();
  add_lambda(stats)->required();
  add_output(stats);

  CLI::App* verify = app.add_subcommand("verify", "Dense verification of the block decomposition");
  add_n(verify, "Number of input copies (even, at most SCHUR_CAP)")->required();
  add_lambda(verify)->required();
  verify->add_option("--tol", config.tol, "Residual tolerance");
  verify->add_option("--seed", config.seed, "Seed for the covariance unitaries");
  verify->add_option("--direction", direction_text, "Bloch direction x,y,z");
  add_output(verify);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of the purification protocol");
  add_n(simulate, "Number of input copies (even)")->required();
  add_lambda(simulate)->required();
  simulate->add_option("--trials", config.trials, "Number of trials")->required();
  simulate->add_option("--seed", config.seed, "Master seed")->required();
  simulate->add_option("--direction", direction_text, "Bloch direction x,y,z");
  simulate->add_option("--workers", config.workers, "Worker threads (0 = all cores)");
  simulate->add_flag("--dense", config.dense, "Simulate on explicit matrices");
  simulate->add_option("--out", config.out_path, "Write the per-trial table to this file");
  simulate->add_option("--format", format_text, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));

  CLI::App* figure = app.add_subcommand("figure1", "lambda_mix(N, inf) against N");
  add_n(figure, "Largest N (even, default 40)");
  figure->add_option("--n-min", config.n_min, "Smallest N (even, default 2)");
  add_lambda(figure);
  figure->add_option("--plot", config.plot_path, "Also write an SVG plot to this file");
  add_output(figure);

  CLI::App* clone = app.add_subcommand("clone", "Optimal N -> M cloning of a mixed qubit");
  add_n(clone, "Number of input copies (even)")->required();
  clone->add_option("--m", m_text, "Number of output copies, or 'inf'")->required();
  add_lambda(clone)->required();
  add_output(clone);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitSuccess;
    }
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    config.qubit_cap = parse_qubit_cap(std::getenv("SCHUR_CAP"));
    config.format = format_text == "tsv" ? Format::tsv : Format::csv;
    if (!app.got_subcommand(figure) || figure->count("--n") > 0) config.n = n;
    if (!lambda_text.empty()) config.lambdas = parse_lambda_list(lambda_text);
    if (!direction_text.empty()) {
      const auto d = parse_number_list(direction_text, "direction");
      if (d.size() != 3) throw UsageError("--direction needs three components x,y,z");
      config.direction = {d[0], d[1], d[2]};
    }
    if (!m_text.empty()) {
      if (m_text == "inf") {
        config.m_infinite = true;
      } else {
        std::int64_t m = 0;
        const auto res = std::from_chars(m_text.data(), m_text.data() + m_text.size(), m);
        if (res.ec != std::errc() || res.ptr != m_text.data() + m_text.size()) {
          throw UsageError("--m must be an integer or 'inf' (got '" + m_text + "')");
        }
        config.m = m;
      }
    }

    if (app.got_subcommand(stats)) config.command = Command::stats;
    if (app.got_subcommand(verify)) config.command = Command::verify;
    if (app.got_subcommand(simulate)) config.command = Command::simulate;
    if (app.got_subcommand(figure)) config.command = Command::figure1;
    if (app.got_subcommand(clone)) config.command = Command::clone;
    switch (config.command) {
      case Command::stats: return cmd_stats(config, out);
      case Command::verify: return cmd_verify(config, out);
      case Command::simulate: return cmd_simulate(config, out);
      case Command::figure1: return cmd_figure1(config, out);
      case Command::clone: return cmd_clone(config, out);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qpurify::cli
