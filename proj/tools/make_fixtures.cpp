// Writes the fixture files under a directory; --check compares instead.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lubinlab/fixtures.hpp"
#include "lubinlab/io.hpp"

using namespace lubinlab;

int main(int argc, char** argv) {
  CLI::App app{"Generate the lubinlab fixture files"};
  std::string dir = "fixtures";
  bool check = false;
  app.add_option("dir", dir, "Output directory")->capture_default_str();
  app.add_flag("--check", check, "Fail if the files on disk differ from the generated ones");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::vector<Fixture>>> files;
  for (int p : {2, 3, 5}) {
    // the p = 3 pair is the documented N = 12 example
    files.push_back({"gm_p" + std::to_string(p) + ".json", {multiplicative_fixture(p, 64, p == 3 ? 12 : 16)}});
  }
  files.push_back({"twists.json", twist_fixtures(64)});
  std::vector<Fixture> negative;
  for (int p : {2, 3, 5}) {
    for (auto& fx : negative_fixtures(p, 16, 64)) negative.push_back(fx);
  }
  files.push_back({"negative.json", negative});

  std::filesystem::create_directories(dir);
  int stale = 0;
  for (const auto& [name, fixtures] : files) {
    std::string text = to_json(fixtures).dump(1) + "\n";
    std::filesystem::path path = std::filesystem::path(dir) / name;
    if (check) {
      std::ifstream in(path);
      std::stringstream ss;
      ss << in.rdbuf();
      if (!in || ss.str() != text) {
        std::cerr << path.string() << " is out of date\n";
        ++stale;
      }
      continue;
    }
    std::ofstream(path) << text;
    std::cout << "wrote " << path.string() << " (" << fixtures.size() << " fixtures)\n";
  }
  return stale == 0 ? 0 : 1;
}
