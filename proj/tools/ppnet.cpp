#include "ppnet/cli/commands.hpp"

#ifdef __GLIBC__
#include <malloc.h>
#endif

int main(int argc, char** argv) {
#ifdef __GLIBC__
    // Keep large activation buffers in the heap between minibatches instead
    // of returning them to the kernel after every layer.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    return ppnet::cli::run(argc, argv);
}
