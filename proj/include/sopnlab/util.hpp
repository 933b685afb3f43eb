#pragma once

#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sopnlab {

// All precondition and parse failures surface as Error; negative *outcomes*
// (no embedding, obstruction, violation) are ordinary return values.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

template <typename... Ts>
std::string cat(const Ts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
}

// Number of worker threads, from SOPNLAB_THREADS (default 1, i.e. sequential).
int thread_count();

// Runs fn(i) for i in [0, n). With more than one thread the index range is
// chunked; results must not depend on execution order (callers only use this
// for searches whose outputs are merged deterministically afterwards).
void parallel_for(int n, const std::function<void(int)>& fn);

std::vector<std::string> split_string(const std::string& text, char sep);
std::string trim(const std::string& text);

}  // namespace sopnlab
