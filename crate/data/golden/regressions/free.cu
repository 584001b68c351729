cudaFree(A_gpu);
