#include <ap_int.h>

// 8-bit adder with carry out
void top_module(ap_uint<8> a, ap_uint<8> b, ap_uint<8>& sum, bool& cout) {
#pragma HLS INTERFACE ap_none port=sum
    ap_uint<9> full = a + b;
    sum = full;
    cout = full[8];
}
