#include "mlc/circle.hpp"

// Circle arithmetic is header-only; this TU anchors the target.
