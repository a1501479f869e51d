#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace vt {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Every regular file under `dir`, keyed by relative path, with its bytes.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& p, const std::string& content);

}  // namespace vt
