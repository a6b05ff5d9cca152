// Minimal usage example: evaluate W(x;a,b) both ways and print the residual
// against the leading term.

#include <cstdio>

#include "fracsum/asymptotics.hpp"
#include "fracsum/blocks.hpp"
#include "fracsum/direct.hpp"

using namespace fracsum;

int main(int argc, char** argv) {
    const char* a = argc > 1 ? argv[1] : "1";
    const char* b = argc > 2 ? argv[2] : "5/2";
    const char* x = argc > 3 ? argv[3] : "100000";

    EvalContext ctx(Params(parse_rational(a), parse_rational(b)), parse_rational(x));
    BlockResult fast = w_block_stats(ctx, 1e-18);
    std::printf("W(%s; %s, %s) = %s   (%llu cells)\n", x, a, b,
                fast.value.str(25).c_str(),
                static_cast<unsigned long long>(fast.cells));

    if (!(ctx.x > 10000000)) {
        BoundedReal slow = w_direct(ctx, 1e-18);
        std::printf("direct check     = %s   overlap: %s\n", slow.str(25).c_str(),
                    fast.value.overlaps(slow) ? "yes" : "NO");
    }

    BoundedReal main = main_term(ctx, 1e-18);
    BoundedReal residual = fast.value - main;
    std::printf("leading term     = %s\n", main.str(25).c_str());
    std::printf("residual         = %s\n", residual.str(25).c_str());
    return 0;
}
