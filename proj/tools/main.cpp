#include "stairwheel/pipeline.hpp"

int main(int argc, char** argv) {
    return stairwheel::cli(argc, argv);
}
