void top_module(bool in, bool& rise, bool& fall) {
#pragma HLS INTERFACE ap_ctrl_none port=return
    static bool prev = false;
    rise = in && !prev;
    fall = !in && prev;
    prev = in;
}
