#pragma once

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace acdiag {

inline constexpr const char* version = "0.1.0";

/// Invalid or inconsistent run configuration. Carries one message per
/// violated field so callers can report all problems at once.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
    explicit ConfigError(std::string issue) : ConfigError(std::vector<std::string>{std::move(issue)}) {}

    const std::vector<std::string>& issues() const { return issues_; }

  private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out.empty() ? std::string("invalid configuration") : out;
    }
    std::vector<std::string> issues_;
};

/// Numerical failure: factorization breakdown, iteration cap exhausted, ...
class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while writing or reading run artifacts.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Runs fn(i) for i in [0, n) on `workers` threads. Results must be written
/// to pre-sized slots; the schedule never affects output content.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Locale-independent float formatting with 17 significant digits (enough to
/// round-trip an IEEE double bit-exactly).
std::string format_double(double value);

}  // namespace acdiag
