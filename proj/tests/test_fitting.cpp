#include <doctest.h>
#include "trpca/fitting.hpp"
