#include <iostream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace {

/// Every solver run in the binary must keep the descent margin, stay on the
/// budget, and end converged DC runs outside the (0, t) dead zone.
class AuditEnvironment : public ::testing::Environment {
 public:
  void SetUp() override { rsmv::tu::install_audit(); }
  void TearDown() override {
    auto& a = rsmv::tu::audit();
    std::cout << "[audit] " << a.summary() << "\n";
    EXPECT_EQ(a.descent_violations, 0);
    EXPECT_EQ(a.feasibility_violations, 0);
    EXPECT_EQ(a.dead_zone_violations, 0);
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::AddGlobalTestEnvironment(new AuditEnvironment);
  return RUN_ALL_TESTS();
}
