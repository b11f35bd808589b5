#include "dcdiff/cli/manifest.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "dcdiff/cli/version.hpp"

namespace dcdiff::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& config, const std::string& stages) {
  nlohmann::json m;
  m["tool"] = "dcdiff";
  m["version"] = kVersion;
  m["stages"] = stages;
  m["config"] = config;
  m["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"openssl", OPENSSL_VERSION_TEXT},
      {"compiler", kCompiler},
  };
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& f : files) {
    arts.push_back({{"file", f.filename().string()},
                    {"bytes", std::filesystem::file_size(f)},
                    {"sha256", sha256_file(f)}});
  }
  m["artifacts"] = arts;
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << m.dump(2) << '\n';
}

}  // namespace dcdiff::cli
