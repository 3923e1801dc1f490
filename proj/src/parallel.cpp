#include "primegap/parallel.hpp"

#include <omp.h>

#include "primegap/errors.hpp"

namespace primegap {

void set_worker_count(int workers) {
    if (workers < 1) throw InvalidArgument("worker count must be at least 1");
    omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

}  // namespace primegap
