/* 2-D matrix multiplication: C = A * B */
#include <stdio.h>
#include <stdlib.h>

#define NI 512
#define NJ 512
#define NK 512

void mm2Cuda(float * A, float * B, float * C) {
    cl_mem A_gpu;
    cl_mem B_gpu;
    cl_mem C_gpu;

    A_gpu = clCreateBuffer(context, CL_MEM_READ_WRITE, sizeof(float) * NI * NK, NULL, NULL);
    B_gpu = clCreateBuffer(context, CL_MEM_READ_WRITE, sizeof(float) * NK * NJ, NULL, NULL);
    C_gpu = clCreateBuffer(context, CL_MEM_READ_WRITE, sizeof(float) * NI * NJ, NULL, NULL);
    clEnqueueWriteBuffer(command_queue, A_gpu, CL_TRUE, 0, sizeof(float) * NI * NK, A, 0, NULL, NULL);
    clEnqueueWriteBuffer(command_queue, B_gpu, CL_TRUE, 0, sizeof(float) * NK * NJ, B, 0, NULL, NULL);
    clEnqueueWriteBuffer(command_queue, C_gpu, CL_TRUE, 0, sizeof(float) * NI * NJ, C, 0, NULL, NULL);

    dim3 block(32, 8);
    dim3 grid(NJ / 32, NI / 8);
    _clSetKernelArg("mm2_kernel1", 0, A_gpu);
    _clSetKernelArg("mm2_kernel1", 1, B_gpu);
    _clSetKernelArg("mm2_kernel1", 2, C_gpu);
    _clEnqueueNDRangeKernel(grid, block, "mm2_kernel1");
    clFinish(command_queue);

    clEnqueueReadBuffer(command_queue, C_gpu, CL_TRUE, 0, sizeof(float) * NI * NJ, C, 0, NULL, NULL);
    clReleaseMemObject(A_gpu);
    clReleaseMemObject(B_gpu);
    clReleaseMemObject(C_gpu);
}

int main(int argc, char ** argv) {
    float * A = (float *) malloc(NI * NK * sizeof(float));
    float * B = (float *) malloc(NK * NJ * sizeof(float));
    float * C = (float *) calloc(NI * NJ, sizeof(float));
    for (int i = 0; i < NI * NK; i++) {
        A[i] = (float)(i % 7) / 7.0f;
    }
    for (int i = 0; i < NK * NJ; i++) {
        B[i] = (float)(i % 5) / 5.0f;
    }
    mm2Cuda(A, B, C);
    printf("C[0] = %f\n", C[0]);
    free(A);
    free(B);
    free(C);
    return 0;
}
