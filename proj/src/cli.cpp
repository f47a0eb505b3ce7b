#include "bmshift/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "bmshift/chains.hpp"
#include "bmshift/dims.hpp"
#include "bmshift/errors.hpp"
#include "bmshift/oracle.hpp"
#include "bmshift/regions.hpp"
#include "bmshift/report.hpp"

namespace bmshift {
namespace {

using json = nlohmann::ordered_json;

RealParam parse_field(const std::string& name, const std::string& text) {
  try {
    return parse_real(text);
  } catch (const ParseError& e) {
    throw ParseError("--" + name + ": " + e.what());
  }
}

std::int64_t window(const JobConfig& c) {
  if (c.n > 0) return c.n;
  switch (c.command) {
    case Command::verify:
      return 20;
    case Command::decompose:
      return 100;
    default:
      return 1000000;
  }
}

EmpiricalOptions empirical_options(const JobConfig& c) {
  EmpiricalOptions o;
  o.horizon = c.horizon;
  o.K = c.K;
  return o;
}

void check_choice(const std::string& name, const std::string& value,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw ValidationError("--" + name + ": unsupported value \"" + value + "\"");
}

json check(const std::string& name, bool pass, const std::string& detail) {
  return {{"check", name}, {"pass", pass}, {"detail", detail}};
}

int run_job(const JobConfig& c, std::ostream& out) {
  check_choice("mode", c.mode, {"closed", "empirical", "both"});
  check_choice("which", c.which, {"hausdorff", "minkowski", "both"});
  check_choice("format", c.format, {"json", "csv"});
  const ParamTuple p =
      ParamTuple::make(parse_field("alpha", c.alpha), parse_field("beta", c.beta),
                       parse_field("gamma", c.gamma), parse_field("delta", c.delta));
  const BinaryMatrix A = [&] {
    try {
      return BinaryMatrix::parse(c.matrix);
    } catch (const ValidationError& e) {
      throw ParseError(std::string("--matrix: ") + e.what());
    }
  }();
  const RegionId region = classify_region(p);
  const bool has_closed = region.id != Region::R6Open && region.id != Region::Unknown;
  const std::int64_t n = window(c);

  switch (c.command) {
    case Command::classify: {
      json j = to_json(region);
      j["params"] = p.to_string();
      j["d"] = has_closed ? to_json(closed_form_d(p, region, c.K)) : json(nullptr);
      j["exact"] = has_closed;
      out << j.dump(2) << '\n';
      return 0;
    }
    case Command::densities: {
      std::optional<DensityVector> closed, empirical;
      if (c.mode != "empirical") {
        if (has_closed) {
          closed = closed_form_d(p, region, c.K);
        } else if (c.mode == "closed") {
          throw NoClosedForm("region " + to_string(region.id) + " has no closed form; use --mode empirical");
        }
      }
      if (c.mode != "closed") empirical = empirical_densities(p, n, empirical_options(c));
      if (c.format == "csv") {
        std::vector<std::pair<std::string, const DensityVector*>> cols;
        if (closed) cols.emplace_back("closed", &*closed);
        if (empirical) cols.emplace_back("empirical", &*empirical);
        out << density_csv(cols);
        return 0;
      }
      json j = to_json(region);
      if (closed) j["closed"] = to_json(*closed);
      if (empirical) j["empirical"] = to_json(*empirical);
      if (closed && empirical) {
        double dev = std::abs(closed->d_inf.to_double() - empirical->d_inf.to_double());
        for (std::size_t i = 1; i <= c.K; ++i) {
          dev = std::max(dev, std::abs(closed->value_d(i) - empirical->value_d(i)));
        }
        j["max_deviation"] = round12(dev);
      }
      out << j.dump(2) << '\n';
      return 0;
    }
    case Command::dim: {
      const bool use_closed = has_closed && c.mode != "empirical";
      DensityVector d = use_closed ? closed_form_d(p, region, c.K)
                                   : empirical_densities(p, n, empirical_options(c));
      const Which which = c.which == "hausdorff"   ? Which::hausdorff
                          : c.which == "minkowski" ? Which::minkowski
                                                   : Which::both;
      SolveOptions so;
      so.seed = c.seed;
      const DimensionReport rep = dimension_report(A, p, region, std::move(d), which, c.eps, so);
      if (c.format == "csv") {
        out << std::setprecision(12) << "quantity,value,err\n";
        if (rep.dim_M) out << "dim_M," << round12(rep.dim_M->value) << ',' << round12(rep.dim_M->err) << '\n';
        if (rep.dim_H) out << "dim_H," << round12(rep.dim_H->value) << ',' << round12(rep.dim_H->err) << '\n';
        return 0;
      }
      out << to_json(rep).dump(2) << '\n';
      return 0;
    }
    case Command::verify: {
      json checks = json::array();
      bool all = true;
      const PatternCount pc = count_patterns(p, A, n);
      try {
        const BigInt brute = exhaustive_count(p, A, n);
        const bool ok = brute == pc.count;
        all = all && ok;
        checks.push_back(check("oracle_equality", ok,
                               "component DP " + pc.count.get_str() + ", exhaustive " + brute.get_str()));
      } catch (const CapExceeded& e) {
        checks.push_back(check("oracle_equality", true, std::string("skipped: ") + e.what()));
      }
      const ChainDecomposition dec = decompose(p, n, c.horizon);
      const BigInt product = chain_product_count(p, A, dec);
      const bool chain_ok = product == pc.count;
      all = all && chain_ok;
      checks.push_back(check("chain_product", chain_ok, "chain product " + product.get_str()));
      std::vector<int> hits(static_cast<std::size_t>(n) + 1, 0);
      for (const auto& mbr : dec.members) ++hits[static_cast<std::size_t>(mbr.value)];
      for (auto r : dec.residual) ++hits[static_cast<std::size_t>(r)];
      bool partition = true;
      for (std::int64_t x = 1; x <= n; ++x) partition = partition && hits[static_cast<std::size_t>(x)] == 1;
      all = all && partition;
      checks.push_back(check("partition", partition,
                             std::to_string(dec.chain_count()) + " chains, " +
                                 std::to_string(dec.residual.size()) + " residual"));
      json j = to_json(region);
      j["n"] = n;
      j["checks"] = std::move(checks);
      j["pass"] = all;
      out << j.dump(2) << '\n';
      return all ? 0 : 1;
    }
    case Command::decompose: {
      write_decomposition_csv(out, decompose(p, n, c.horizon));
      return 0;
    }
  }
  return 0;
}

}  // namespace

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.out.empty()) return run_job(config, out);
    std::ostringstream buffer;
    const int code = run_job(config, buffer);
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw ValidationError("--out: cannot open " + config.out);
    file << buffer.str();
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 3;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Dimensions of Beatty multiple shifts"};
  app.require_subcommand(1);
  JobConfig config;

  const std::map<std::string, Command> commands{{"classify", Command::classify},
                                                {"densities", Command::densities},
                                                {"dim", Command::dim},
                                                {"verify", Command::verify},
                                                {"decompose", Command::decompose}};
  const std::map<std::string, std::string> help{
      {"classify", "region and closed-form density vector"},
      {"densities", "closed-form and/or empirical density vectors"},
      {"dim", "Minkowski and Hausdorff dimensions"},
      {"verify", "oracle and chain-product cross-checks"},
      {"decompose", "CSV dump of the chain decomposition of [1,n]"}};
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--alpha", config.alpha, "alpha (e.g. 3/2, sqrt(2), 1.25)")->capture_default_str();
    sub->add_option("--beta", config.beta, "beta")->capture_default_str();
    sub->add_option("--gamma", config.gamma, "gamma")->capture_default_str();
    sub->add_option("--delta", config.delta, "delta")->capture_default_str();
    sub->add_option("--matrix", config.matrix, "rows of 0/1 separated by ';'")->capture_default_str();
    sub->add_option("--n", config.n,
                    "window size (default 1000000; verify 20; decompose 100)");
    sub->add_option("--horizon", config.horizon, "iteration horizon (default automatic)");
    sub->add_option("--K", config.K, "tracked finite classes")->capture_default_str();
    sub->add_option("--eps", config.eps, "series truncation tolerance")->capture_default_str();
    sub->add_option("--mode", config.mode, "closed | empirical | both")->capture_default_str();
    sub->add_option("--which", config.which, "hausdorff | minkowski | both")->capture_default_str();
    sub->add_option("--format", config.format, "json | csv")->capture_default_str();
    sub->add_option("--out", config.out, "output path (default stdout)");
    sub->add_option("--seed", config.seed, "seed for solver restarts")->capture_default_str();
    sub->callback([&config, cmd = cmd] { config.command = cmd; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace bmshift
