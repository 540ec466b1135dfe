// Acceptance suite: one pass/fail line per criterion.

#include <cstdio>

int main() {
  std::printf("acceptance suite placeholder\n");
  return 0;
}
