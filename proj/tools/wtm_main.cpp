#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wtm/cli.hpp"

namespace {

struct OptionSpec {
  const char* name;
  const char* help;
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

const std::vector<OptionSpec> kMu{{"mu", "functional parameter mu"},
                                  {"mu-ratio", "mu as a fraction of the critical threshold"}};

std::vector<CommandSpec> specs() {
  auto with_mu = [](std::vector<OptionSpec> o) {
    o.insert(o.end(), kMu.begin(), kMu.end());
    return o;
  };
  const std::vector<OptionSpec> search{{"grid-size", "search grid nodes (default WTM_GRID_SIZE or 512)"},
                                       {"iterations", "maximum ascent iterations"},
                                       {"seed", "random seed"}};
  auto with_search = [&](std::vector<OptionSpec> o) {
    o.insert(o.end(), search.begin(), search.end());
    return o;
  };
  return {
      {"norms", "weighted norms of a profile file",
       {{"profile", "profile file"}, {"p", "exponent"}, {"alpha", "derivative weight"}, {"theta", "measure weight"}}},
      {"rearrange", "nonincreasing rearrangement of a profile file",
       {{"profile", "profile file"}, {"l", "measure exponent"}, {"p", "Dirichlet exponent"}, {"k", "Dirichlet k"},
        {"out", "output profile path"}}},
      {"tm-eval", "Trudinger-Moser functional of a profile file",
       with_mu({{"profile", "profile file"}, {"p", "exponent"}, {"theta", "measure weight"}})},
      {"moser", "Moser sequence blow-up table",
       with_mu({{"p", "exponent"}, {"theta", "measure weight"}, {"R", "support radius"}, {"j-max", "last j for the bound"},
                {"quad-j-max", "last j evaluated by quadrature"}})},
      {"vanish", "normalized vanishing sequence", with_mu({{"p", "exponent"}, {"theta", "measure weight"}, {"steps", "members"}})},
      {"extremal", "ascent for the supremum of the functional",
       with_search(with_mu({{"p", "exponent"}, {"theta", "measure weight"}, {"trial", "extra candidate profile file"}}))},
      {"gn", "Gagliardo-Nirenberg ratio minimization", with_search({{"theta", "measure weight"}})},
      {"el-shoot", "Euler-Lagrange shooting solve", {{"lambda", "nonlinearity coefficient"}, {"theta", "measure weight"}}},
  };
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Trudinger-Moser numerical lab"};
  app.set_version_flag("--version", wtm::cli::kVersion);
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, bool> supercritical;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for CSV traces and profiles");

  const auto table = specs();
  for (const auto& spec : table) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    auto& store = values[spec.name];
    for (const auto& o : spec.options) sub->add_option(std::string("--") + o.name, store[o.name], o.help);
    sub->add_flag("--allow-supercritical", supercritical[spec.name], "permit mu at or above the threshold");
  }
  auto* sweep = app.add_subcommand("sweep", "run one command over lists of theta, mu-ratio and j-max concurrently");
  auto& sweep_store = values["sweep"];
  sweep->add_option("--command", sweep_store["command"], "target command")->required();
  sweep->add_option("--theta", sweep_store["theta"], "comma-separated theta values");
  sweep->add_option("--mu-ratio", sweep_store["mu-ratio"], "comma-separated mu ratios");
  sweep->add_option("--j-max", sweep_store["j-max"], "comma-separated j-max values");
  std::vector<std::string> passthrough;
  sweep->add_option("--set", passthrough, "key=value passed to every run");
  sweep->add_flag("--allow-supercritical", supercritical["sweep"], "permit mu at or above the threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wtm::cli::kExitValidation;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  wtm::cli::Params prm;
  for (const auto& [k, v] : values[name])
    if (chosen->count("--" + k) > 0) prm.set(k, v);
  if (supercritical[name]) prm.set("allow-supercritical", "true");
  prm.set("out-dir", out_dir);
  for (const auto& kv : passthrough) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cout << wtm::cli::json{{"error", "validation"}, {"message", "--set expects key=value"}}.dump(2) << '\n';
      return wtm::cli::kExitValidation;
    }
    prm.set(kv.substr(0, eq), kv.substr(eq + 1));
  }

  const auto result = wtm::cli::dispatch(name, prm);
  std::cout << result.summary.dump(2) << '\n';
  return result.exit_code;
}
