#include "properties.hpp"

#include <doctest.h>

TEST_SUITE("properties")
{
  TEST_CASE("randomized property suites")
  {
    for (const auto& o : props::all(200, 7)) {
      CAPTURE(o.name);
      CAPTURE(o.first_failure);
      CHECK(o.cases >= 200);
      CHECK(o.failures == 0);
    }
  }
}
