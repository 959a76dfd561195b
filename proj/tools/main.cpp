#include "betapoly/cli.hpp"

int main(int argc, char** argv) { return betapoly::dispatch(argc, argv); }
