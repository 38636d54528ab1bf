#pragma once

namespace lamina {

// Every data-parallel kernel has an OpenMP path and a plain serial
// reference. Both fill per-item results first and reduce them in index
// order, so the two paths agree bit-for-bit.
enum class Exec { serial, openmp };

int max_threads();

}  // namespace lamina
