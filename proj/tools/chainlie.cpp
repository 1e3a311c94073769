#include <CLI11.hpp>

#include <iostream>

#include "chainlie/cli.hpp"
#include "chainlie/errors.hpp"

int main(int argc, char** argv) {
  using namespace chainlie;
  cli::RunConfig cfg;
  std::string chi, phi, format = "text", seed = "0";

  CLI::App app{"chainlie: relation trees, Lie presentations and Jacobi checks over graded complexes"};
  app.require_subcommand(1);
  for (const char* name : {"check-dga", "derive", "lie", "jacobi", "demo-gv"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--spec", cfg.spec_path, "spec file, or builtin:cech-de-rham / builtin:chain");
    sub->add_option("--chi", chi, "degree of chi: p or p,q");
    sub->add_option("--phi", phi, "degree of Phi (default: Phi is chi)");
    sub->add_option("--depth", cfg.depth, "depth cap of the relation tree");
    sub->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--seed", seed, "random seed, or 'random' for an entropy seed");
    sub->add_option("--tol", cfg.tol, "numeric Jacobi tolerance");
    sub->add_option("--kernels", cfg.kernels_path, "kernel file for the numeric Jacobi check");
    sub->add_option("--samples", cfg.samples, "numeric Jacobi samples");
    sub->add_option("--triples", cfg.triples, "symbolic Jacobi sample triples");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "machine" ? cli::Format::machine : cli::Format::text;
  try {
    if (!chi.empty()) cfg.chi = cli::parse_degree_arg(chi);
    if (!phi.empty()) cfg.phi = cli::parse_degree_arg(phi);
    if (seed == "random") cfg.entropy_seed = true;
    else cfg.seed = std::stoull(seed);
  } catch (const Error& e) {
    std::cerr << "chainlie: " << e.what() << "\n";
    return 2;
  } catch (const std::exception&) {
    std::cerr << "chainlie: --seed expects a non-negative integer or 'random'\n";
    return 2;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
