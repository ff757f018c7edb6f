// Loopback adapter: serves the reference debugger over the adapter protocol on stdin/stdout.

#include <CLI11.hpp>

#include <iostream>

#include "hdldiff/adapter/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reference debugger behind the adapter protocol"};
  std::string fault = "none";
  std::string misbehave = "none";
  app.add_option("--fault", fault, "none | F1..F5");
  app.add_option("--misbehave", misbehave, "none | silent | garbage | exit");
  CLI11_PARSE(app, argc, argv);

  const auto f = hdldiff::parse_fault(fault);
  const auto m = hdldiff::parse_misbehave(misbehave);
  if (!f || !m) {
    std::cerr << "unknown --fault or --misbehave value\n";
    return 2;
  }
  std::ios::sync_with_stdio(false);
  return hdldiff::serve_adapter(std::cin, std::cout, *f, *m);
}
