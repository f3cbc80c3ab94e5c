// Writes synthetic demo cohorts in both raw file formats, so the CLI can
// be exercised without any external dataset.
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: make_demo_data OUTDIR [SEED]\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  const std::uint64_t seed =
      argc == 3 ? std::strtoull(argv[2], nullptr, 10) : 2025;

  try {
    std::filesystem::create_directories(dir);
    const auto sakar = mrcst::synthetic::sakar_like(seed);
    const auto maxlittle = mrcst::synthetic::maxlittle_like(seed);
    const std::string sakar_path = (dir / "demo_sakar.csv").string();
    const std::string maxlittle_path = (dir / "demo_maxlittle.csv").string();
    mrcst::synthetic::write_sakar_file(sakar_path, sakar);
    mrcst::synthetic::write_maxlittle_file(maxlittle_path, maxlittle);
    std::cout << "wrote " << sakar_path << " (" << sakar.size()
              << " subjects) and " << maxlittle_path << " ("
              << maxlittle.size() << " subjects), seed " << seed << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
