#pragma once

#include <gtest/gtest.h>

#include "heavynet/errors.hpp"

// Fails unless `stmt` throws heavynet::Error carrying `expected_code`.
#define EXPECT_ERROR_CODE(stmt, expected_code)                                   \
  do {                                                                          \
    bool thrown_ = false;                                                       \
    try {                                                                       \
      stmt;                                                                     \
    } catch (const ::heavynet::Error& ex_) {                                    \
      thrown_ = true;                                                           \
      EXPECT_EQ(ex_.code(), expected_code) << ex_.what();                       \
    }                                                                           \
    EXPECT_TRUE(thrown_) << "expected " << ::heavynet::to_string(expected_code); \
  } while (0)
