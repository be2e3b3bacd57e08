#include <ap_int.h>

// Index of the lowest set bit, zero if none
void top_module(ap_uint<8> in, ap_uint<3>& pos) {
    pos = 0;
    for (int i = 0; i < 8; i++) {
        if (in[i]) {
            pos = i;
            break;
        }
    }
}
