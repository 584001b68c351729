Convolution2D_kernel <<< grid, block >>> (A_gpu, B_gpu);
