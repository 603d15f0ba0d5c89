/** \file parallel.hpp
 * \brief Bounded worker pool for independent sweep and quadrature points. */
#pragma once

#include <cstddef>
#include <functional>

namespace bragg {

/** Number of worker threads. Defaults to BRAGG_SENSE_THREADS if set, else
 * the hardware concurrency. */
std::size_t thread_count();

/** Override the worker count for the whole process (0 restores default). */
void set_thread_count(std::size_t n);

/** Run body(i) for i in [0, n). Each index is processed exactly once; the
 * caller writes results into index-addressed slots so reductions stay
 * independent of scheduling. The first exception thrown is rethrown. */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace bragg
