// Writes synthetic sources for trying the pipeline end to end:
//   seismo-fixture conflict --out DIR   -> DIR/source.csv, DIR/spec.json, DIR/map.svg
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seismo/chunker/store.hpp"
#include "seismo/fixtures.hpp"

int main(int argc, char** argv) {
  using namespace seismo;
  CLI::App app{"Generate synthetic seismo sources", "seismo-fixture"};
  std::string kind = "conflict";
  std::string out;
  std::uint64_t seed = 1;
  app.add_option("kind", kind, "conflict | pandemic | random")
      ->check(CLI::IsMember({"conflict", "pandemic", "random"}))
      ->capture_default_str();
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", seed, "Seed for the random kind")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    Dataset d = kind == "conflict" ? fixtures::conflict_dataset()
                : kind == "pandemic" ? fixtures::pandemic_dataset()
                                     : fixtures::random_dataset(seed);
    const std::filesystem::path dir(out);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / "source.csv", fixtures::to_csv(d));
    detail::write_file(dir / "spec.json", fixtures::csv_spec_for(d).to_json() + "\n");
    detail::write_file(dir / "map.svg", fixtures::fixture_map_svg(d.regions()));
    std::cerr << kind << ": " << d.regions().size() << " regions, " << d.periods().size() << " periods, "
              << d.indicators().size() << " indicators written to " << out << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
