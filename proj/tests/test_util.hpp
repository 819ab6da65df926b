#ifndef TILEPERM_TEST_UTIL_HPP
#define TILEPERM_TEST_UTIL_HPP

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

namespace test_util {

// Fresh directory under the system temp root, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("tileperm_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& rel) const { return (path_ / rel).string(); }

  private:
    std::filesystem::path path_;
};

#ifdef TILEPERM_BIN
// Runs the CLI with the given argument string; returns its exit status.
inline int run_cli(const std::string& args, bool quiet = true) {
    std::string cmd = std::string(TILEPERM_BIN) + " " + args;
    if (quiet) cmd += " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

}  // namespace test_util

#endif  // TILEPERM_TEST_UTIL_HPP
