#pragma once

#include <string>
#include <vector>

// Expected values for the four regular elements: the words, the non-empty
// coset lists, and the piece decompositions with the (d, e) implied by their
// G_a / G_m factors.
namespace ref {

struct RootCase {
  const char* type;
  const char* word;
  int d;
  int length;
};

inline const std::vector<RootCase> kRoots = {
    {"F4", "1 2 3 2 3 4", 8, 6},
    {"E6", "1 3 4 3 2 4 5 6", 9, 8},
    {"E7", "7 6 5 4 5 2 4 3 1", 14, 9},
    {"E8", "8 7 6 5 4 5 2 4 3 1", 24, 10},
};

struct ScanCase {
  const char* type;
  const char* w;
  const char* I;
  std::vector<const char*> cosets;  // W_I w0 u, listed by u
};

inline const std::vector<ScanCase> kScans = {
    {"F4", "1 2 3 2 3 4", "2 3", {"e", "1 2", "4 3"}},
    {"E6", "1 3 4 3 2 4 5 6", "2 3 4 5", {"e", "6 5 4", "1 3"}},
    {"E7", "7 6 5 4 5 2 4 3 1", "1 2 3 4 5 6", {"e", "7 6 5"}},
    {"E8", "8 7 6 5 4 5 2 4 3 1", "1 2 3 4 5 6 7", {"e", "8 7 6 5"}},
};

struct Factor {
  const char* w;
  int gamma;  // 1-based node, 0 for gamma = 1
};

struct Decomposition {
  const char* name;
  const char* type;
  const char* I;
  const char* coset;  // x = minimal representative of W_I w0 u
  std::vector<Factor> factors;
  int d;
  int e;
  const char* levi;  // product of the conjugated factors
};

inline const std::vector<Decomposition> kDecompositions = {
    {"F4 y-piece", "F4", "2 3 4", "1 2", {{"1 2 3 2", 0}, {"3 4", 3}}, 1, 1, "2 3 4"},
    {"F4 z-piece", "F4", "1 2 3", "4 3", {{"1", 0}, {"2", 2}, {"3 2 3 4", 0}}, 1, 1, "1 2 3"},
    {"F4 open piece", "F4", "2 3", "e", {{"1 2 3 2 3", 1}, {"4", 4}}, 2, 0, "2 3 2 3"},
    {"E6 y-piece", "E6", "2 3 4 5 6", "6 5 4", {{"1", 0}, {"3", 3}, {"4 3 2 4 5 6", 0}}, 1, 1,
     "6 3 5 4 2"},
    {"E6 z-piece", "E6", "1 2 3 4 5", "1 3", {{"1 3 4 3 2", 0}, {"4 5 6", 4}}, 1, 1,
     "2 4 5 3 1"},
    {"E6 open piece", "E6", "2 3 4 5", "e", {{"1 3 4 3 2 4 5", 1}, {"6", 6}}, 2, 0,
     "5 4 5 2 4 3"},
    {"E7 closed piece", "E7", "1 2 3 4 5 6", "7 6 5", {{"7 6 5 4 5 2", 0}, {"4 3 1", 4}}, 1, 1,
     "1 3 4 2 5 6"},
    {"E7 open piece", "E7", "1 2 3 4 5 6", "e", {{"7 6 5 4 5 2 4 3 1", 7}}, 1, 0,
     "1 3 4 3 2 4 5 6"},
    {"E8 closed piece", "E8", "1 2 3 4 5 6 7", "8 7 6 5", {{"8 7 6 5 4 5 2", 0}, {"4 3 1", 4}}, 1,
     1, "7 6 5 4 2 3 1"},
    {"E8 open piece", "E8", "1 2 3 4 5 6 7", "e", {{"8 7 6 5 4 5 2 4 3 1", 8}}, 1, 0,
     "7 6 5 4 5 2 4 3 1"},
};

}  // namespace ref
