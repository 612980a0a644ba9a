// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include "capres/acceptance.hpp"

int main()
{
  const auto checks = capres::RunAcceptance(&std::cout);
  int failed = 0;
  for (const auto &c : checks)
  {
    failed += c.pass ? 0 : 1;
  }
  std::cout << checks.size() - failed << "/" << checks.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
