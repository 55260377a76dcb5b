/**
 * Reader for the workbench's tabular emissions: CSV with `# key: value`
 * metadata lines above a header row, all cells numeric. Every parse
 * failure names the offending file, line, and column.
 */

export interface Table {
  path: string;
  meta: Record<string, string>;
  columns: string[];
  /** Column-major numeric data, same order as `columns`. */
  data: number[][];
  rowCount: number;
}

/** Input does not match the schema the figure kind expects. */
export class SchemaError extends Error {}

export function parseTable(text: string, path: string): Table {
  const meta: Record<string, string> = {};
  let columns: string[] | null = null;
  let data: number[][] = [];
  let rowCount = 0;

  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const raw = lines[i] ?? "";
    const line = raw.trim();
    const lineNo = i + 1;
    if (line === "") continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const sep = body.indexOf(":");
      if (sep > 0) meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
      continue;
    }
    const parts = line.split(",").map((p) => p.trim());
    if (columns === null) {
      columns = parts;
      data = columns.map(() => []);
      continue;
    }
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `${path}:${lineNo}: expected ${columns.length} fields, got ${parts.length}`,
      );
    }
    for (let c = 0; c < columns.length; c++) {
      const cell = parts[c] ?? "";
      const value = Number(cell);
      if (cell === "" || !Number.isFinite(value)) {
        throw new SchemaError(
          `${path}:${lineNo}: column ${columns[c]}: not a number: '${cell}'`,
        );
      }
      (data[c] as number[]).push(value);
    }
    rowCount++;
  }

  if (columns === null) throw new SchemaError(`${path}: no header line found`);
  if (rowCount === 0) throw new SchemaError(`${path}: no data rows`);
  return { path, meta, columns, data, rowCount };
}

/** Numeric values of one named column; missing names list what is present. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `${table.path}: missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return table.data[idx] as number[];
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) column(table, name);
}

export function metaNumber(table: Table, key: string): number {
  const raw = table.meta[key];
  if (raw === undefined) {
    throw new SchemaError(`${table.path}: missing required metadata '# ${key}: ...'`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${table.path}: metadata ${key}: not a number: '${raw}'`);
  }
  return value;
}
