var doc = { users: [{ id: 1, tags: ['a', 'b'] }, { id: 2, tags: [] }], meta: { ok: true } };
var text = JSON.stringify(doc);
var back = JSON.parse(text);
console.log(text.length, back.users[0].tags.join('+'), back.meta.ok);
console.log(JSON.stringify(Object.keys(back).sort()));
