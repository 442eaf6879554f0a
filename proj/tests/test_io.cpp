#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "cqed/io/csv.hpp"
#include "cqed/io/config.hpp"
#include "cqed/io/manifest.hpp"
#include "cqed/pipelines.hpp"
