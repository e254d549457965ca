#pragma once

#include <CLI11.hpp>

#include <functional>
#include <string>

namespace orbitlet::cli {

struct Context {
  unsigned threads = 0;  // 0 means available parallelism
  std::string out;       // JSON destination; empty means stdout
  std::function<void()> run;
};

void register_commands(CLI::App& app, Context& ctx);

}  // namespace orbitlet::cli
