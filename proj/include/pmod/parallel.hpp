#pragma once

#include <functional>

namespace pmod {

// fn(i) for i in [0, n), spread over up to `jobs` worker threads; jobs <= 1
// runs inline.  Work items are claimed from an atomic counter, so callers
// must write results into disjoint slots for determinism.  The first thrown
// exception is rethrown after all workers join.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Hardware concurrency with a floor of 1.
int default_jobs();

} // namespace pmod
