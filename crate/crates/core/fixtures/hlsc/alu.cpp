#include <ap_int.h>

// Small ALU: op selects add, sub, and, or, xor, shift
ap_int<16> top_module(ap_int<16> x, ap_int<16> y, ap_uint<3> op) {
    ap_int<16> r;
    switch (op) {
    case 0: r = x + y; break;
    case 1: r = x - y; break;
    case 2: r = x & y; break;
    case 3: r = x | y; break;
    case 4: r = x ^ y; break;
    case 5: r = x << 1; break;
    case 6: r = x >> 1; break;
    default: r = ~x;
    }
    return r;
}
