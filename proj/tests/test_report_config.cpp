#include <doctest.h>

TEST_SUITE("report_config") {}
