/**
 * In-memory matrix handling and the file formats the core CLI ingests.
 * The binding never does any metric math; it only moves bytes.
 */

export interface DenseMatrix {
    n: number;
    d: number;
    values: Float64Array; // row-major, length n * d
}

export type MatrixInput = number[][] | DenseMatrix;

/** Validate a 2-D input and copy it into a row-major Float64Array. */
export function toDenseMatrix(data: MatrixInput): DenseMatrix {
    if (Array.isArray(data)) {
        if (data.length === 0 || !Array.isArray(data[0])) {
            throw new TypeError("matrix must be 2-D: expected an array of equal-length number rows");
        }
        const n = data.length;
        const d = (data[0] as number[]).length;
        if (d === 0) {
            throw new TypeError("matrix rows must be non-empty");
        }
        const values = new Float64Array(n * d);
        for (let i = 0; i < n; i++) {
            const row = data[i];
            if (!Array.isArray(row) || row.length !== d) {
                throw new TypeError(`matrix must be rectangular: row ${i} has ${(row as number[]).length ?? "no"} entries, expected ${d}`);
            }
            for (let j = 0; j < d; j++) {
                const v = row[j];
                if (typeof v !== "number") {
                    throw new TypeError(`matrix entries must be numbers, got ${typeof v} at (${i}, ${j})`);
                }
                values[i * d + j] = v;
            }
        }
        return { n, d, values };
    }
    const { n, d, values } = data;
    if (!Number.isInteger(n) || !Number.isInteger(d) || n < 1 || d < 1) {
        throw new TypeError(`matrix dimensions must be positive integers, got ${n} x ${d}`);
    }
    if (!(values instanceof Float64Array)) {
        throw new TypeError("matrix values must be a Float64Array");
    }
    if (values.length !== n * d) {
        throw new TypeError(`matrix values have length ${values.length}, expected n * d = ${n * d}`);
    }
    return { n, d, values: values.slice() };
}

/** RAWF64: 16-byte header "EMBQ" + u32 n + u32 d + 4 reserved zero bytes, then f64 LE data. */
export function encodeRawf64(m: DenseMatrix): Buffer {
    const buf = Buffer.alloc(16 + 8 * m.n * m.d);
    buf.write("EMBQ", 0, "ascii");
    buf.writeUInt32LE(m.n, 4);
    buf.writeUInt32LE(m.d, 8);
    for (let i = 0; i < m.values.length; i++) {
        buf.writeDoubleLE(m.values[i], 16 + 8 * i);
    }
    return buf;
}

/** NPY v1.0 with dtype '<f8', C order — the subset the core reader accepts. */
export function encodeNpy(m: DenseMatrix): Buffer {
    let header = `{'descr': '<f8', 'fortran_order': False, 'shape': (${m.n}, ${m.d}), }`;
    const pad = (64 - ((10 + header.length + 1) % 64)) % 64;
    header = header + " ".repeat(pad) + "\n";
    const buf = Buffer.alloc(10 + header.length + 8 * m.values.length);
    buf.write("\x93NUMPY", 0, "latin1");
    buf.writeUInt8(1, 6);
    buf.writeUInt8(0, 7);
    buf.writeUInt16LE(header.length, 8);
    buf.write(header, 10, "latin1");
    for (let i = 0; i < m.values.length; i++) {
        buf.writeDoubleLE(m.values[i], 10 + header.length + 8 * i);
    }
    return buf;
}
