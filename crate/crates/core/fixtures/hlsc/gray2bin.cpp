#include <ap_int.h>

void top_module(ap_uint<8> gray, ap_uint<8>& bin) {
    ap_uint<8> b = gray;
    for (int shift = 1; shift < 8; shift = shift * 2) {
        b = b ^ (b >> shift);
    }
    bin = b;
}
