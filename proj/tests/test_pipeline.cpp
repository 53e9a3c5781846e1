#include <doctest.h>
#include "trpca/pipeline.hpp"
