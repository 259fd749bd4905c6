// Command-line front end: estimate, sample, exact, ingest-ucinet, fixtures.
//
// Exit codes: 0 success, 1 infeasible input or every sample rejected (or the
// exact search ran out of budget), 2 usage or parse error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zotab/zotab.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A path to a margin file, or the name of a built-in fixture.
zotab::MarginalSet load_input(const std::string& arg) {
  if (std::filesystem::exists(arg)) return zotab::parse_marginal_file(arg);
  if (auto f = zotab::find_fixture(arg)) return *f;
  throw UsageError("'" + arg + "' is neither a readable file nor a fixture name (see 'zotab fixtures list')");
}

void print_table(std::ostream& out, const zotab::BinaryTable& t) {
  const auto& dims = t.dims;
  const std::size_t row = static_cast<std::size_t>(dims[dims.d() - 1]);
  const std::size_t block = row * static_cast<std::size_t>(dims[dims.d() - 2]);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    if (i % block == 0) {
      out << "layer";
      auto c = dims.coords(i);
      for (int a = 0; a + 2 < dims.d(); ++a) out << ' ' << c[a];
      out << ":\n";
    }
    out << int(t.cells[i]) << ((i + 1) % row ? ' ' : '\n');
  }
}

std::string cell_string(const zotab::BinaryTable& t) {
  std::string s;
  for (auto v : t.cells) s += char('0' + v);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling and counting zero-one tables with fixed (d-1)-way margins"};
  app.require_subcommand(1);

  std::string input;
  zotab::SisConfig cfg;
  std::size_t boot_b = 0;
  double alpha = 0.05;
  bool json = false, timing = false;
  std::string record;

  auto* est = app.add_subcommand("estimate", "Estimate the number of tables by sequential importance sampling");
  est->add_option("input", input, "Margin file or fixture name")->required();
  est->add_option("--samples,-n", cfg.samples, "Number of samples N")->check(CLI::PositiveNumber);
  est->add_option("--seed,-s", cfg.seed, "Master seed");
  est->add_option("--workers,-w", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  est->add_option("--layer-axis", cfg.layer_axis, "Axis cut into layers (3-way tables)")->check(CLI::Range(0, 2));
  est->add_option("--bootstrap,-B", boot_b, "Bootstrap replications (0 disables intervals)");
  est->add_option("--alpha", alpha, "Interval level is 1 - alpha")->check(CLI::Range(0.0, 1.0));
  est->add_flag("--json", json, "Print the machine-readable record instead of text");
  est->add_option("--record", record, "Also write the machine-readable record to this file");
  est->add_flag("--timing", timing, "Include runtime_ms in the record");

  std::size_t count = 1;
  std::size_t max_attempts = 0;
  auto* smp = app.add_subcommand("sample", "Draw accepted tables with their proposal probabilities");
  smp->add_option("input", input, "Margin file or fixture name")->required();
  smp->add_option("--seed,-s", cfg.seed, "Master seed");
  smp->add_option("--count,-k", count, "Number of accepted tables to print")->check(CLI::PositiveNumber);
  smp->add_option("--max-attempts", max_attempts, "Give up after this many draws (default 1000 per table)");
  smp->add_option("--layer-axis", cfg.layer_axis, "Axis cut into layers (3-way tables)")->check(CLI::Range(0, 2));
  smp->add_flag("--json", json, "One JSON object per table");

  std::uint64_t budget = 0;
  std::size_t enumerate = 0;
  auto* ex = app.add_subcommand("exact", "Count (or list) all tables exactly");
  ex->add_option("input", input, "Margin file or fixture name")->required();
  ex->add_option("--budget", budget, "Search node limit (0 = unlimited)");
  ex->add_option("--enumerate", enumerate, "Also print up to this many tables");

  std::string dl_path, out_path;
  int relations = 0, nodes = 0;
  auto* ing = app.add_subcommand("ingest-ucinet", "Convert a UCINET DL relation stack into a margin file");
  ing->add_option("dl-file", dl_path, "UCINET DL file")->required();
  ing->add_option("--out,-o", out_path, "Margin file to write")->required();
  ing->add_option("--relations", relations, "Required number of relations (0 = any)");
  ing->add_option("--nodes", nodes, "Required number of actors (0 = any)");

  std::string fixture_name;
  auto* fx = app.add_subcommand("fixtures", "Built-in margin sets");
  fx->require_subcommand(1);
  fx->add_subcommand("list", "List fixture names");
  auto* fx_show = fx->add_subcommand("show", "Print a fixture as a margin file");
  fx_show->add_option("name", fixture_name, "Fixture name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*est) {
      const auto m = load_input(input);
      const auto t0 = std::chrono::steady_clock::now();
      const auto ws = zotab::run_sis(m, cfg);
      auto report = zotab::summarize(ws);
      if (boot_b > 0 && report.accepted > 0) report.bootstrap = zotab::bootstrap_ci(ws, boot_b, alpha, cfg.seed);
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      zotab::RunInfo info{cfg.seed, input, timing ? std::optional<double>(ms) : std::nullopt};
      const auto j = zotab::to_json(report, info);
      if (json)
        std::cout << j.dump() << '\n';
      else
        std::cout << zotab::to_text(report);
      if (!record.empty()) {
        std::ofstream f(record);
        if (!f) throw std::runtime_error("cannot write '" + record + "'");
        f << j.dump(2) << '\n';
      }
      return report.accepted > 0 ? kOk : kInfeasible;
    }

    if (*smp) {
      const auto m = load_input(input);
      const std::size_t limit = max_attempts ? max_attempts : 1000 * count;
      std::size_t found = 0, attempt = 0;
      for (; attempt < limit && found < count; ++attempt) {
        auto rng = zotab::stream_rng(cfg.seed, attempt);
        const auto s = zotab::sample_table(m, rng, cfg.layer_axis);
        if (!s.accepted) continue;
        ++found;
        if (json) {
          nlohmann::ordered_json j;
          j["attempt"] = attempt;
          j["log_q"] = s.log_q;
          j["dims"] = s.table.dims.sizes;
          j["cells"] = cell_string(s.table);
          std::cout << j.dump() << '\n';
        } else {
          std::cout << "# table " << found << " (attempt " << attempt << ") log_q=" << s.log_q << '\n';
          print_table(std::cout, s.table);
        }
      }
      if (found < count) {
        std::cerr << "only " << found << " of " << count << " tables accepted in " << attempt << " attempts\n";
        return kInfeasible;
      }
      return kOk;
    }

    if (*ex) {
      const auto m = load_input(input);
      zotab::OracleOptions opt;
      if (budget) opt.node_budget = budget;
      const auto c = zotab::exact_count(m, opt);
      std::cout << c << '\n';
      if (enumerate)
        for (const auto& t : zotab::exact_enumerate(m, enumerate, opt)) {
          std::cout << "# " << cell_string(t) << '\n';
          print_table(std::cout, t);
        }
      return c > 0 ? kOk : kInfeasible;
    }

    if (*ing) {
      zotab::UcinetOptions opt;
      if (relations) opt.expect_relations = relations;
      if (nodes) opt.expect_nodes = nodes;
      const auto stack = zotab::parse_ucinet_dl(dl_path, opt);
      std::vector<std::string> comment{"margins of " + std::filesystem::path(dl_path).filename().string() + ", " +
                                       std::to_string(stack.nodes) + " actors, " +
                                       std::to_string(stack.table.dims[2]) + " relations"};
      if (!stack.relations.empty()) {
        std::string names = "relations (layer order):";
        for (const auto& r : stack.relations) names += " " + r;
        comment.push_back(names);
      }
      std::ofstream f(out_path);
      if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
      // Actors on axes 0 and 1, relations on the column axis.
      f << zotab::emit_marginal_text(zotab::marginals_of(stack.table), comment);
      std::cout << "wrote " << out_path << " (" << stack.table.ones() << " ones)\n";
      return kOk;
    }

    if (*fx) {
      if (*fx_show) {
        const auto m = zotab::find_fixture(fixture_name);
        if (!m) throw UsageError("unknown fixture '" + fixture_name + "'");
        std::cout << zotab::emit_marginal_text(*m, {fixture_name});
      } else {
        for (const auto& n : zotab::fixture_names()) std::cout << n << '\n';
        std::cout << "# cube_m<m>_s<s> is accepted for any 1 <= m <= 64, 0 <= s <= m\n";
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const zotab::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const zotab::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
