#include <ap_int.h>

void top_module(ap_uint<32> in, ap_uint<6>& out) {
    ap_uint<6> total = 0;
    for (int i = 0; i < 32; i++) {
#pragma HLS UNROLL
        total += in[i];
    }
    out = total;
}
