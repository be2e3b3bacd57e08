#include <ap_int.h>

void top_module(ap_uint<16> word, bool& even) {
    bool p = false;
    for (int i = 0; i < 16; i++) {
#pragma HLS UNROLL
        p = p ^ word[i];
    }
    even = !p;
}
