#include "gbl/parallel.hpp"

#include <atomic>

namespace gbl {

namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(); }

void set_worker_count(int jobs) { g_workers.store(std::max(jobs, 1)); }

}  // namespace gbl
