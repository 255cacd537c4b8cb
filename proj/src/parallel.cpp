#include "supg/parallel.hpp"

#include <omp.h>

namespace supg {

int max_threads() { return omp_get_max_threads(); }

}  // namespace supg
