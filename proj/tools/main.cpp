#include "commands.hpp"

#include "orbitlet/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// Reads a JSON config mirroring the flags: top-level keys are global options, nested objects
// hold the options of the subcommand with that name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_configurable() && !opt->get_lnames().empty()) {
        const auto& name = opt->get_lnames().front();
        if (opt->count() > 0)
          j[name] = opt->results().size() == 1 ? nlohmann::json(opt->results().front()) : nlohmann::json(opt->results());
        else if (default_also && !opt->get_default_str().empty())
          j[name] = opt->get_default_str();
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const nlohmann::json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto p = parents;
        p.push_back(it.key());
        flatten(*it, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array())
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(*it));
      out.push_back(std::move(item));
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitlet: dilation groups, dual orbits, vanishing moments and wavelet transforms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags");
  orbitlet::cli::Context ctx;
  app.add_option("--threads", ctx.threads, "Worker cap (default: available parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--json-out", ctx.out, "Write the JSON report to this file instead of stdout");
  orbitlet::cli::register_commands(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ctx.run) ctx.run();
    return 0;
  } catch (const orbitlet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
