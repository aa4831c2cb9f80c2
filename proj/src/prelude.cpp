#include "horn/prelude.hpp"

#include <fstream>
#include <stdexcept>

namespace horn {

void extract_prelude(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const PreludeFile& file : prelude_files()) {
    const auto path = dir / file.name;
    std::ofstream out(path, std::ios::binary);
    out.write(file.text.data(), static_cast<std::streamsize>(file.text.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace horn
