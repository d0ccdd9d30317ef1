var log = 'GET /a 200\nPOST /b 404\nGET /c 200';
var lines = log.split('\n');
var ok = lines.filter(function (l) { return /\s200$/.test(l); });
console.log(ok.length, log.replace(/\d{3}/g, function (m) { return '[' + m + ']'; }).split('\n')[1]);
var m = /^(\w+) (\S+)/.exec(lines[1]);
console.log(m[1], m[2]);
