#include <cstdio>

int main() {
    std::puts("chordq: command-line interface not wired up yet");
    return 2;
}
